#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "crn/adversary.hpp"
#include "crn/baseline_ocr.hpp"
#include "crn/learning.hpp"
#include "crn/linkmodel.hpp"
#include "crn/trust.hpp"

namespace crn {

enum class Algorithm { sfp_exact, sfp_approx, baseline_ocr_ctt };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& text);

struct EngineOptions {
  Algorithm algorithm = Algorithm::sfp_approx;
  std::uint64_t seed = 1;
  double temperature = 0.5;
  ScheduleBand band;
  double explore_floor = 0.01;
  double explore_exponent = 0.3;
  std::uint64_t state_limit = 4096;

  bool trust = false;
  double p_ack = 0.05;
  double trust_temperature = 0.5;

  AdversaryConfig adversary;

  int flow_window = 1;  // packets of one flow allowed in the network at once
  Slot warmup = 20000;
  Slot measure = 10000;
  int checkpoints = 10;
  bool snapshot_all = false;
};

struct PacketRecord {
  Slot slot = 0;
  int flow = 0;
  double delay = 0.0;
  bool delivered = true;
};

struct StrategyRecord {
  int checkpoint = 0;
  int node = 0;
  int sink = 0;
  std::uint64_t state = 0;
  Action action;
  double prob = 0.0;
};

// Visit-weighted average of one source's strategy over the states it saw.
struct SourceMix {
  int flow = 0;
  int node = 0;
  std::vector<Action> actions;
  Eigen::VectorXd mass;
};

struct RunResults {
  std::uint64_t seed = 0;
  std::vector<PacketRecord> packets;  // measurement window
  std::vector<StrategyRecord> strategies;
  std::vector<double> residuals;      // per checkpoint: summed per-slot max strategy change
  std::vector<SourceMix> source_mix;
  double mean_delay = 0.0;
  double malicious_frequency = 0.0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t in_flight = 0;
  std::int64_t dropped = 0;
  std::int64_t stale_reports = 0;
};

// Slot-level simulator. One learner per (node, sink) pair on the routing
// graph of that sink; every learner picks an action every slot, and nodes
// holding packets transmit with the learner of their head packet's sink.
class Simulation {
 public:
  Simulation(NetworkTopology topology, SpectrumModel spectrum, LinkPhyParams phy, EngineOptions options);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void run_slot();
  RunResults run();

  Slot slot() const;
  const NetworkTopology& topology() const;
  std::span<const ClusterSpectrumState> clusters() const;
  std::int64_t generated() const;
  std::int64_t delivered() const;
  std::int64_t in_flight() const;
  std::int64_t dropped() const;
  // Packets delivered so far (all slots, including warmup).
  const std::vector<PacketRecord>& deliveries() const;
  std::uint64_t state_key(int node) const;
  // Learner of (node, sink), or nullptr when the node does not route there.
  const LearnerState* learner(int node, int sink) const;
  const TrustState* trust(int node, int sink) const;
  RunResults results() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Mean of the delivered delays; 0 for none.
double mean_delay(const std::vector<PacketRecord>& packets);

}  // namespace crn
