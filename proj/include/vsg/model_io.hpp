#pragma once

#include <cstdint>
#include <string>

#include "vsg/ann.hpp"

namespace vsg::ann {

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  MlpModel model;
  Normalizer normalizer;
  std::uint64_t train_config_fingerprint = 0;
};

/// JSON document: dimensions, activation ids, row-major weights, normalizer
/// vectors and the training-config fingerprint. Doubles round-trip exactly.
void save_model(const std::string& path, const ModelFile& file);
ModelFile load_model(const std::string& path);

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);

}  // namespace vsg::ann
