#include "crn/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace crn {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string hex_hash(std::uint64_t hash) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

// The locale never touches the output: every number goes through snprintf in
// the "C" locale or std::to_string of an integer.
void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResultsIoError("cannot open " + path.string() + " for writing");
  out << body;
  out.close();
  if (!out) throw ResultsIoError("write failed: " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ResultsIoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

}  // namespace

void write_results(const RunResults& results, std::uint64_t config_hash, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);

  std::string metrics = "slot,flow,delay,delivered\n";
  for (const auto& p : results.packets)
    metrics += std::to_string(p.slot) + ',' + std::to_string(p.flow) + ',' + format_double(p.delay) + ',' +
               (p.delivered ? "1" : "0") + '\n';
  write_file(out_dir / "metrics.csv", metrics);

  std::string strategies = "checkpoint,node,state,action,prob\n";
  for (const auto& s : results.strategies)
    strategies += std::to_string(s.checkpoint) + ',' + std::to_string(s.node) + ",s" + std::to_string(s.sink) +
                  ':' + std::to_string(s.state) + ',' + std::to_string(s.action.relay) + ':' +
                  std::to_string(s.action.channel) + ',' + format_double(s.prob) + '\n';
  write_file(out_dir / "strategies.csv", strategies);

  std::string summary = "config_hash,seed,mean_delay,malicious_frequency\n";
  summary += hex_hash(config_hash) + ',' + std::to_string(results.seed) + ',' + format_double(results.mean_delay) +
             ',' + format_double(results.malicious_frequency) + '\n';
  write_file(out_dir / "summary.csv", summary);
}

void write_sweep_summary(const std::vector<SweepRow>& rows, const std::filesystem::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
  std::string body = "point,config_hash,seed,mean_delay,malicious_frequency,delivered\n";
  for (const auto& r : rows)
    body += r.point + ',' + hex_hash(r.config_hash) + ',' + std::to_string(r.seed) + ',' +
            format_double(r.mean_delay) + ',' + format_double(r.malicious_frequency) + ',' +
            std::to_string(r.delivered) + '\n';
  write_file(file, body);
}

}  // namespace crn
