#include "aspinn/errors.hpp"
#include "aspinn/nn.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace aspinn {

namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json network_json(const Mlp& net) {
  json j;
  j["layer_sizes"] = net.layer_sizes;
  j["activation"] = net.activation == Activation::Tanh ? "tanh" : "relu";
  json weights = json::array();
  json biases = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    // Row-major flattening.
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(net.weights[l].size()));
    for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < net.weights[l].cols(); ++c) flat.push_back(net.weights[l](r, c));
    weights.push_back(std::move(flat));
    biases.push_back(vector_json(net.biases[l]));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

Mlp network_from(const json& j) {
  Mlp net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto act = j.at("activation").get<std::string>();
  if (act == "tanh") {
    net.activation = Activation::Tanh;
  } else if (act == "relu") {
    net.activation = Activation::Relu;
  } else {
    throw IoError("checkpoint: unknown activation '" + act + "'");
  }
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (net.layer_sizes.size() < 2 || weights.size() != net.layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw IoError("checkpoint: layer count mismatch");
  }
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    const auto flat = weights[l].get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
      throw IoError("checkpoint: weight count mismatch in layer " + std::to_string(l));
    }
    Eigen::MatrixXd w(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
    net.weights.push_back(std::move(w));
    Eigen::VectorXd b = vector_from(biases[l]);
    if (b.size() != rows) throw IoError("checkpoint: bias count mismatch in layer " + std::to_string(l));
    net.biases.push_back(std::move(b));
  }
  return net;
}

json standardizer_json(const Standardizer& s) { return {{"mean", vector_json(s.mean)}, {"scale", vector_json(s.scale)}}; }

Standardizer standardizer_from(const json& j) { return {vector_from(j.at("mean")), vector_from(j.at("scale"))}; }

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

void save_checkpoint(const RegModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "aspinn-checkpoint/1";
  j["kind"] = "regression";
  j["network"] = network_json(model.net);
  j["x_norm"] = standardizer_json(model.x_norm);
  j["y_norm"] = standardizer_json(model.y_norm);
  j["trained"] = model.trained;
  j["dropout_rate"] = model.dropout_rate;
  write_json(j, path);
}

void save_checkpoint(const PiModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "aspinn-checkpoint/1";
  j["kind"] = "interval";
  j["network"] = network_json(model.net);
  j["x_norm"] = standardizer_json(model.x_norm);
  j["y_norm"] = standardizer_json(model.y_norm);
  j["trained"] = model.trained;
  j["coverage_target"] = model.coverage_target;
  j["lambda"] = model.lambda;
  write_json(j, path);
}

RegModel load_reg_checkpoint(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    if (j.at("kind") != "regression") throw IoError(path.string() + ": not a regression checkpoint");
    RegModel m;
    m.net = network_from(j.at("network"));
    m.x_norm = standardizer_from(j.at("x_norm"));
    m.y_norm = standardizer_from(j.at("y_norm"));
    m.trained = j.at("trained").get<bool>();
    m.dropout_rate = j.value("dropout_rate", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

PiModel load_pi_checkpoint(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    if (j.at("kind") != "interval") throw IoError(path.string() + ": not an interval checkpoint");
    PiModel m;
    m.net = network_from(j.at("network"));
    m.x_norm = standardizer_from(j.at("x_norm"));
    m.y_norm = standardizer_from(j.at("y_norm"));
    m.trained = j.at("trained").get<bool>();
    m.coverage_target = j.at("coverage_target").get<double>();
    m.lambda = j.at("lambda").get<double>();
    return m;
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace aspinn
