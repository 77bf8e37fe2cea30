#include "vsg/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vsg::ann {

using nlohmann::json;

namespace {

json vec_to_json(const VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

VectorXd vec_from_json(const json& j, Eigen::Index expected, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (expected >= 0 && Eigen::Index(values.size()) != expected)
    throw Error(ErrorCode::DimensionMismatch, std::string("model file: wrong length for ") + what);
  return Eigen::Map<const VectorXd>(values.data(), Eigen::Index(values.size()));
}

}  // namespace

std::string model_to_json(const ModelFile& file) {
  file.model.validate();
  file.normalizer.validate();
  json doc;
  doc["format"] = "vsg-mlp";
  doc["version"] = kModelFormatVersion;
  json layers = json::array();
  for (const auto& l : file.model.layers()) {
    std::vector<double> w;
    w.reserve(std::size_t(l.weights.size()));
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.push_back(l.weights(r, c));
    layers.push_back({{"inputs", l.inputs()},
                      {"outputs", l.outputs()},
                      {"activation", to_string(l.activation)},
                      {"weights", w},
                      {"bias", vec_to_json(l.bias)}});
  }
  doc["layers"] = layers;
  doc["normalizer"] = {{"input_mean", vec_to_json(file.normalizer.input_mean)},
                       {"input_std", vec_to_json(file.normalizer.input_std)},
                       {"target_mean", vec_to_json(file.normalizer.target_mean)},
                       {"target_std", vec_to_json(file.normalizer.target_std)}};
  std::ostringstream fp;
  fp << std::hex << file.train_config_fingerprint;
  doc["train_config_fingerprint"] = fp.str();
  return doc.dump(1);
}

ModelFile model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "vsg-mlp") throw Error(ErrorCode::Io, "not a vsg-mlp model file");
    if (doc.at("version").get<int>() != kModelFormatVersion)
      throw Error(ErrorCode::Io, "unsupported model file version");
    std::vector<DenseLayer> layers;
    for (const auto& jl : doc.at("layers")) {
      const auto in = jl.at("inputs").get<Eigen::Index>();
      const auto out = jl.at("outputs").get<Eigen::Index>();
      const VectorXd w = vec_from_json(jl.at("weights"), in * out, "weights");
      DenseLayer l{MatrixXd(out, in), vec_from_json(jl.at("bias"), out, "bias"),
                   activation_from_string(jl.at("activation").get<std::string>())};
      for (Eigen::Index r = 0; r < out; ++r)
        for (Eigen::Index c = 0; c < in; ++c) l.weights(r, c) = w(r * in + c);
      layers.push_back(std::move(l));
    }
    ModelFile f;
    f.model = MlpModel(std::move(layers));
    const auto& jn = doc.at("normalizer");
    f.normalizer.input_mean = vec_from_json(jn.at("input_mean"), f.model.input_size(), "input_mean");
    f.normalizer.input_std = vec_from_json(jn.at("input_std"), f.model.input_size(), "input_std");
    f.normalizer.target_mean = vec_from_json(jn.at("target_mean"), f.model.output_size(), "target_mean");
    f.normalizer.target_std = vec_from_json(jn.at("target_std"), f.model.output_size(), "target_std");
    f.normalizer.validate();
    f.train_config_fingerprint = std::stoull(doc.at("train_config_fingerprint").get<std::string>(), nullptr, 16);
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::string& path, const ModelFile& file) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << model_to_json(file) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace vsg::ann
