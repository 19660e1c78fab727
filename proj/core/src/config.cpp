#include "aspinn/config.hpp"

#include "aspinn/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace aspinn {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [end, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || end != last) throw ConfigError("invalid value for '" + key + "': '" + value + "'");
  return out;
}

}  // namespace

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    entries.emplace_back(key, value);
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config_text(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<MethodKind> parse_method_list(const std::string& text) {
  std::vector<MethodKind> methods;
  for (const auto& name : split(text, ',')) {
    if (name.empty()) continue;
    const MethodKind m = parse_method(name);
    for (MethodKind existing : methods)
      if (existing == m) throw ConfigError("method listed twice: " + name);
    methods.push_back(m);
  }
  if (methods.empty()) throw ConfigError("empty method list");
  return methods;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    cfg.problem = value;
  } else if (key == "method") {
    cfg.methods = parse_method_list(value);
  } else if (key == "iterations") {
    cfg.iterations = parse_number<int>(key, value);
  } else if (key == "reps") {
    cfg.repetitions = parse_number<int>(key, value);
  } else if (key == "batch") {
    cfg.batch = parse_number<int>(key, value);
  } else if (key == "theta") {
    cfg.theta = parse_number<double>(key, value);
  } else if (key == "r") {
    cfg.r = parse_number<double>(key, value);
  } else if (key == "eta") {
    cfg.eta = parse_number<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "epochs") {
    cfg.epochs = parse_number<int>(key, value);
  } else if (key == "lr") {
    cfg.learning_rate = parse_number<double>(key, value);
  } else if (key == "gp-steps") {
    cfg.gp_steps = parse_number<int>(key, value);
  } else if (key == "dropout-rate") {
    cfg.dropout_rate = parse_number<double>(key, value);
  } else if (key == "dropout-passes") {
    cfg.dropout_passes = parse_number<int>(key, value);
  } else if (key == "hidden") {
    cfg.hidden.clear();
    for (const auto& w : split(value, ',')) cfg.hidden.push_back(parse_number<int>(key, w));
  } else if (key == "field-noise-denominator") {
    const double d = parse_number<double>(key, value);
    if (d != 150.0 && d != 1500.0) throw ConfigError("field-noise-denominator must be 150 or 1500");
    cfg.field_noise_denominator = d;
  } else if (key == "preset") {
    if (value != "quick") throw ConfigError("unknown preset '" + value + "'");
    apply_quick_preset(cfg);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_settings(ExperimentConfig& cfg, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) apply_setting(cfg, key, value);
}

}  // namespace aspinn
