#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/engine.hpp"

namespace crn {

class ResultsIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes metrics.csv, strategies.csv and summary.csv into out_dir (created if
// missing). Column layouts:
//   metrics.csv     slot,flow,delay,delivered
//   strategies.csv  checkpoint,node,state,action,prob
//                   state is "s<sink>:<key>", action is "<relay>:<channel>"
//   summary.csv     config_hash,seed,mean_delay,malicious_frequency
void write_results(const RunResults& results, std::uint64_t config_hash, const std::filesystem::path& out_dir);

struct SweepRow {
  std::string point;  // "key=value;key=value"
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double mean_delay = 0.0;
  double malicious_frequency = 0.0;
  std::int64_t delivered = 0;
};

// sweep_summary.csv: point,config_hash,seed,mean_delay,malicious_frequency,delivered
void write_sweep_summary(const std::vector<SweepRow>& rows, const std::filesystem::path& file);

// Formats a double so that it reads back to the same value.
std::string format_double(double value);

std::string hex_hash(std::uint64_t hash);

}  // namespace crn
