#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crn/spectrum.hpp"
#include "crn/topology.hpp"

namespace crn {

struct LinkPhyParams {
  double packet_bits = 1000.0;
  double rate = 1e5;
  std::vector<double> error_rate;  // per channel; missing entries mean 0
  // When set, every channel's ETT is this value regardless of L, R and P_e.
  std::optional<double> fixed_ett = 0.01;

  bool operator==(const LinkPhyParams&) const = default;
};

class InfeasibleLink : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Effective transmission time L / (R (1 - P_e(k))).
double ett(const LinkPhyParams& phy, int channel);

// Actions of the nodes transmitting this slot; unset entries are silent.
class JointActionView {
 public:
  explicit JointActionView(int nodes = 0) : actions_(nodes) {}

  int size() const { return static_cast<int>(actions_.size()); }
  const std::optional<Action>& operator[](int node) const { return actions_.at(node); }
  void set(int node, Action a) { actions_.at(node) = a; }
  void clear(int node) { actions_.at(node).reset(); }

 private:
  std::vector<std::optional<Action>> actions_;
};

// Everything the link metrics read for one slot: geometry, rates, the
// clusters' observed vectors with their sensing lags, and the PHY.
struct LinkContext {
  const NetworkTopology& topology;
  const SpectrumModel& spectrum;
  std::span<const ClusterSpectrumState> clusters;
  Slot slot;
  const LinkPhyParams& phy;
};

// Probability that channel k stays idle for one slot at both ends of (i, j).
double link_availability(const LinkContext& ctx, int i, int j, int channel);

// RTS indicators (sender succeeds, receiver hears it) for i sending to j on
// channel k. Only other nodes' entries of `joint` are consulted.
std::pair<int, int> rts_success_probs(const JointActionView& joint, const NetworkTopology& topology,
                                      int i, int j, int channel);

// Links toward i that would complete negotiation under `joint`.
int contention_load(const JointActionView& joint, const NetworkTopology& topology, int i);

// Expected one-hop delay of i playing `a` while everyone else plays `joint`.
double expected_link_delay(const LinkContext& ctx, const JointActionView& joint, int i, Action a);
double expected_link_delay(const LinkContext& ctx, const JointActionView& joint, int i);

// Advancement toward `sink` per second of expected delay.
double local_utility(const LinkContext& ctx, const JointActionView& joint, int i, Action a,
                     int sink);
double local_utility(const LinkContext& ctx, const JointActionView& joint, int i, int sink);

}  // namespace crn
