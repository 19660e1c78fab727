#include "aspinn/errors.hpp"
#include "aspinn/harness.hpp"
#include "aspinn/stats.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace aspinn {

namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string run_stem(const RunRecord& run) {
  return std::string(method_name(run.method)) + "_rep" + std::to_string(run.repetition);
}

ordered_json run_json(const RunRecord& run) {
  ordered_json j;
  j["method"] = method_name(run.method);
  j["repetition"] = run.repetition;
  j["seed"] = run.seed;
  j["config_hash"] = hex64(run.config_hash);
  j["initial_dataset_fingerprint"] = hex64(run.initial_fingerprint);
  j["initial_dataset_size"] = run.initial_size;
  j["auuc"] = run.curve.auuc;
  ordered_json iters = ordered_json::array();
  for (const auto& it : run.iterations) {
    ordered_json e;
    e["iteration"] = it.iteration;
    e["batch"] = it.batch;
    e["picked"] = it.picked;
    e["observed"] = it.observed;
    e["dataset_size"] = it.dataset_size;
    e["pi_delta"] = it.pi_delta;
    if (it.season) {
      e["season"] = {{"index", it.season->season},
                     {"precip", it.season->precip},
                     {"aspect", it.season->aspect},
                     {"vh", it.season->vh}};
    }
    iters.push_back(std::move(e));
  }
  j["iterations"] = std::move(iters);
  return j;
}

}  // namespace

void export_results(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "curves", ec);
  if (ec) throw IoError("cannot create " + (dir / "curves").string() + ": " + ec.message());

  for (const auto& run : result.records) write_curve_csv(run.curve, dir / "curves" / (run_stem(run) + ".csv"));

  // Group runs by method, in configuration order.
  std::vector<std::pair<MethodKind, std::vector<const RunRecord*>>> groups;
  for (MethodKind m : cfg.methods) {
    std::vector<const RunRecord*> runs;
    for (const auto& run : result.records)
      if (run.method == m) runs.push_back(&run);
    groups.emplace_back(m, std::move(runs));
  }

  for (const auto& [method, runs] : groups) {
    std::string text = "iteration,mean_pi_delta,std_pi_delta\n";
    for (const auto& row : aggregate_curves(runs)) {
      text += std::to_string(row.iteration) + ',' + format_double(row.mean) + ',' + format_double(row.std) + '\n';
    }
    write_text(dir / ("aggregate_" + std::string(method_name(method)) + ".csv"), text);
  }

  ordered_json summary;
  summary["problem"] = cfg.problem;
  summary["config_hash"] = hex64(config_hash(cfg));
  summary["iterations"] = cfg.iterations;
  summary["repetitions"] = cfg.repetitions;
  summary["std_kind"] = "sample (n-1)";
  ordered_json methods = ordered_json::object();
  for (const auto& [method, runs] : groups) {
    std::vector<double> values;
    for (const auto* run : runs) values.push_back(run->curve.auuc);
    methods[std::string(method_name(method))] = {{"runs", values.size()},
                                                 {"auuc_mean", mean(values)},
                                                 {"auuc_std", sample_std(values)},
                                                 {"auuc", values}};
  }
  summary["methods"] = std::move(methods);

  ordered_json pairs = ordered_json::array();
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      // Pair by repetition; only repetitions completed by both methods count.
      std::vector<double> xa, xb;
      for (const auto* ra : groups[a].second)
        for (const auto* rb : groups[b].second)
          if (ra->repetition == rb->repetition) {
            xa.push_back(ra->curve.auuc);
            xb.push_back(rb->curve.auuc);
          }
      ordered_json e;
      e["a"] = method_name(groups[a].first);
      e["b"] = method_name(groups[b].first);
      e["n"] = xa.size();
      if (xa.size() >= 2) {
        const auto r = paired_t_test(xa, xb);
        e["t"] = std::isfinite(r.t) ? ordered_json(r.t) : ordered_json(r.t > 0 ? "inf" : "-inf");
        e["p"] = r.p;
        e["dof"] = r.dof;
        e["degenerate"] = r.degenerate;
      } else {
        e["t"] = nullptr;
        e["p"] = nullptr;
      }
      pairs.push_back(std::move(e));
    }
  }
  summary["pairwise"] = std::move(pairs);

  ordered_json failures = ordered_json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"method", method_name(f.method)}, {"repetition", f.repetition}, {"error", f.message}});
  }
  summary["failures"] = std::move(failures);
  write_text(dir / "summary.json", summary.dump(2) + '\n');

  ordered_json runs = ordered_json::array();
  for (const auto& run : result.records) runs.push_back(run_json(run));
  write_text(dir / "runs.json", runs.dump(2) + '\n');
  write_text(dir / "config.txt", canonical_config(cfg));

  std::string timing = "method,repetition,iteration,wall_seconds\n";
  for (const auto& run : result.records)
    for (const auto& it : run.iterations)
      timing += std::string(method_name(run.method)) + ',' + std::to_string(run.repetition) + ',' +
                std::to_string(it.iteration) + ',' + format_double(it.wall_seconds) + '\n';
  write_text(dir / "timing.csv", timing);
}

}  // namespace aspinn
