#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "crn/config.hpp"
#include "crn/diagnostics.hpp"
#include "crn/results_io.hpp"

namespace fs = std::filesystem;
using namespace crn;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Source {
  std::string path;
  std::string preset;
  std::vector<std::string> overrides;
};

void add_source_options(CLI::App* cmd, Source& src) {
  cmd->add_option("config", src.path, "YAML experiment config");
  cmd->add_option("--preset", src.preset, "start from a built-in preset instead of a file");
  cmd->add_option("--set", src.overrides, "override a field, e.g. --set adversary.sh_scale=4");
}

ExperimentConfig load(const Source& src) {
  if (src.path.empty() == src.preset.empty()) throw ConfigError("give exactly one of a config file or --preset");
  ExperimentConfig c = src.path.empty() ? parse_config_text("preset: " + src.preset, "--preset")
                                        : parse_config(src.path);
  for (const auto& o : src.overrides) apply_override(c, o);
  validate(c);
  return c;
}

fs::path output_dir(const std::string& flag) {
  if (const char* env = std::getenv("CRNSIM_OUT"); env && *env) return env;
  return flag;
}

// "a=1,2" -> key "a", values {"1", "2"}. Values containing commas (lists)
// can be given in YAML flow form separated by ';' instead.
std::pair<std::string, std::vector<std::string>> split_vary(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--vary '" + text + "' must look like key=v1,v2");
  std::vector<std::string> values;
  const char sep = text.find(';', eq) != std::string::npos ? ';' : ',';
  std::size_t start = eq + 1;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    values.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return {text.substr(0, eq), values};
}

int cmd_run(const Source& src, const std::string& out_flag, bool quiet) {
  const ExperimentConfig c = load(src);
  const fs::path out = output_dir(out_flag);
  if (!quiet)
    std::cerr << "run: " << algorithm_name(c.algorithm) << " seed " << c.seed << " -> " << out.string() << "\n";
  const RunResults r = run_experiment(c);
  write_results(r, config_hash(c), out);
  if (!quiet)
    std::cerr << "mean delay " << format_double(r.mean_delay) << " s over " << r.packets.size()
              << " packets, malicious frequency " << format_double(r.malicious_frequency) << "\n";
  return kOk;
}

int cmd_sweep(const Source& src, const std::vector<std::string>& vary, int replicas, int jobs,
              const std::string& out_flag) {
  const ExperimentConfig base = load(src);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& v : vary) axes.push_back(split_vary(v));

  struct Task {
    std::string point;
    std::string dir;
    ExperimentConfig config;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> idx(axes.size(), 0);
  int point_id = 0;
  for (bool more = true; more; ++point_id) {
    ExperimentConfig point = base;
    std::string label;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const std::string& value = axes[a].second[idx[a]];
      apply_override(point, axes[a].first + "=" + value);
      label += (a ? ";" : "") + axes[a].first + "=" + value;
    }
    validate(point);
    for (int r = 0; r < replicas; ++r) {
      ExperimentConfig c = point;
      c.seed = base.seed + static_cast<std::uint64_t>(r);
      char dir[64];
      std::snprintf(dir, sizeof dir, "point%03d/seed%llu", point_id, static_cast<unsigned long long>(c.seed));
      tasks.push_back({label, dir, std::move(c)});
    }
    more = false;
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].second.size()) {
        more = true;
        break;
      }
      idx[a] = 0;
    }
  }

  const fs::path out = output_dir(out_flag);
  std::vector<SweepRow> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      const Task& t = tasks[i];
      try {
        const RunResults r = run_experiment(t.config);
        write_results(r, config_hash(t.config), out / t.dir);
        rows[i] = {t.point, config_hash(t.config), t.config.seed, r.mean_delay, r.malicious_frequency, r.delivered};
        std::lock_guard<std::mutex> lock(log);
        std::cerr << "[" << i + 1 << "/" << tasks.size() << "] " << t.point << " seed " << t.config.seed
                  << ": mean delay " << format_double(r.mean_delay) << "\n";
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error(tasks[i].dir + ": " + errors[i]);
  write_sweep_summary(rows, out / "sweep_summary.csv");
  std::cerr << "wrote " << (out / "sweep_summary.csv").string() << "\n";
  return kOk;
}

int cmd_check(const Source& src, bool print) {
  const ExperimentConfig c = load(src);
  build_scenario(c);
  if (print) std::cout << serialize(c);
  std::cerr << "config ok, hash " << hex_hash(config_hash(c)) << "\n";
  return kOk;
}

int cmd_diag() {
  bool ok = true;
  for (const auto& d : run_diagnostics()) {
    std::cout << (d.passed ? "ok   " : "FAIL ") << d.name << " (" << d.detail << ")\n";
    ok = ok && d.passed;
  }
  return ok ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slot-level cognitive radio routing simulator"};
  app.require_subcommand(1);

  Source run_src, sweep_src, check_src;
  std::string run_out = "out", sweep_out = "sweep";
  bool quiet = false, print = false;
  std::vector<std::string> vary;
  int replicas = 1;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run one experiment and write its CSVs");
  add_source_options(run, run_src);
  run->add_option("-o,--out", run_out, "output directory (CRNSIM_OUT overrides)");
  run->add_flag("-q,--quiet", quiet, "no progress output");

  CLI::App* sweep = app.add_subcommand("sweep", "cartesian sweep with replica seeds");
  add_source_options(sweep, sweep_src);
  sweep->add_option("--vary", vary, "key=v1,v2 (repeatable)");
  sweep->add_option("--replicas", replicas, "seeds per point, counting up from the config seed")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-j,--jobs", jobs, "parallel replicas")->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", sweep_out, "output directory (CRNSIM_OUT overrides)");

  CLI::App* check = app.add_subcommand("check", "validate a config");
  add_source_options(check, check_src);
  check->add_flag("--print", print, "print the expanded config");

  app.add_subcommand("diag", "invariant checks on toy instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_src, run_out, quiet);
    if (*sweep) return cmd_sweep(sweep_src, vary, replicas, jobs, sweep_out);
    if (*check) return cmd_check(check_src, print);
    return cmd_diag();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const TopologyError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
