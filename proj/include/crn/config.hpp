#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/engine.hpp"

namespace crn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectrumConfig {
  int channels = 2;
  double slot_length = 0.5;
  double lambda = 5.0;
  double mu = 1.0 / 0.42;
  // Optional per-cluster, per-channel overrides of lambda and mu.
  std::vector<std::vector<double>> cluster_lambda;
  std::vector<std::vector<double>> cluster_mu;

  bool operator==(const SpectrumConfig&) const = default;
};

struct NodeConfig {
  double x = 0.0;
  double y = 0.0;
  Role role = Role::relay;
  std::optional<int> cluster;  // derived from the layout when absent

  bool operator==(const NodeConfig&) const = default;
};

struct TopologyConfig {
  double arena_width = 250.0;
  double arena_height = 250.0;
  double radius = 35.0;
  int clusters = 3;
  std::vector<std::vector<Vec2>> cluster_polygons;
  std::vector<NodeConfig> nodes;  // explicit deployment; generated when empty
  int relays = 100;
  int flows = 4;
  double min_flow_distance = 100.0;
  int max_attempts = 1000;

  bool operator==(const TopologyConfig&) const = default;
};

struct LearningConfig {
  double temperature = 0.5;
  ScheduleBand band;
  double explore_floor = 0.01;
  double explore_exponent = 0.3;
  std::uint64_t state_limit = 4096;

  bool operator==(const LearningConfig&) const = default;
};

struct TrustConfig {
  bool enabled = false;
  double p_ack = 0.05;
  double temperature = 0.5;

  bool operator==(const TrustConfig&) const = default;
};

struct RunConfig {
  Slot warmup = 20000;
  Slot measure = 10000;
  int checkpoints = 10;
  int flow_window = 1;  // packets of one flow allowed in the network at once
  bool snapshot_all = false;

  bool operator==(const RunConfig&) const = default;
};

struct ExperimentConfig {
  std::string preset;  // informational once expanded
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::sfp_approx;
  SpectrumConfig spectrum;
  TopologyConfig topology;
  std::vector<std::pair<int, int>> flows;  // explicit (source, sink) pairs
  LinkPhyParams phy;
  LearningConfig learning;
  TrustConfig trust;
  AdversaryConfig adversary;
  RunConfig run;

  bool operator==(const ExperimentConfig&) const = default;
};

// YAML text -> validated config. A top-level `preset` key expands the named
// preset first and overlays the remaining keys. Errors carry line numbers.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::string& path);

// Canonical YAML for a config; parse_config_text(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

// Hash of every semantic field except the seed.
std::uint64_t config_hash(const ExperimentConfig& config);

void validate(const ExperimentConfig& config);

// Applies a dotted override such as "adversary.sh_scale=4" or "topology.flows=8".
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Built-in preset YAML by name; nullopt when unknown.
std::optional<std::string> preset_text(const std::string& name);
std::vector<std::string> preset_names();

struct Scenario {
  NetworkTopology topology;
  SpectrumModel spectrum;
  LinkPhyParams phy;
  EngineOptions options;
};

// Deploys (or reads) the topology and translates the config into engine inputs.
Scenario build_scenario(const ExperimentConfig& config);

RunResults run_experiment(const ExperimentConfig& config);

}  // namespace crn
