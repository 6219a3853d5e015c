#pragma once

// Builds library inputs mirroring an oracle::World.

#include <vector>

#include "crn/linkmodel.hpp"
#include "crn/rng.hpp"
#include "oracle.hpp"

namespace fixtures {

struct Mirror {
  crn::NetworkTopology topology;
  crn::SpectrumModel spectrum;
  std::vector<crn::ClusterSpectrumState> clusters;
  crn::LinkPhyParams phy;
  crn::Slot slot;

  crn::LinkContext context() const { return {topology, spectrum, clusters, slot, phy}; }
};

inline Mirror mirror(const oracle::World& w, std::vector<crn::Role> roles, std::vector<crn::Flow> flows,
                     crn::Slot slot = 100) {
  std::vector<crn::NodeRecord> nodes;
  for (std::size_t v = 0; v < w.nodes.size(); ++v)
    nodes.push_back({static_cast<int>(v), {w.nodes[v].x, w.nodes[v].y}, roles[v], w.nodes[v].cluster});
  const int q = static_cast<int>(w.clusters.size());
  const int k = static_cast<int>(w.clusters[0].size());
  crn::NetworkTopology topo(nodes, w.radius, k, q, std::move(flows));
  crn::SpectrumModel spectrum(q, k, w.slot, crn::ChannelParams{w.lambda, w.mu});
  std::vector<crn::ClusterSpectrumState> states;
  for (int c = 0; c < q; ++c) {
    crn::ClusterSpectrumState s;
    s.cluster_id = c;
    for (int ch = 0; ch < k; ++ch) {
      const auto bit = static_cast<std::uint8_t>(w.clusters[c][ch].observed);
      s.true_state.push_back(bit);
      s.observed_state.push_back(bit);
      s.last_sensed_slot.push_back(slot - w.clusters[c][ch].lag);
    }
    states.push_back(std::move(s));
  }
  crn::LinkPhyParams phy;
  phy.fixed_ett = w.ett;
  return {std::move(topo), std::move(spectrum), std::move(states), phy, slot};
}

// Random observed bits and lags below `max_lag`.
inline void randomize_channels(oracle::World& w, crn::Rng& rng, long max_lag = 3) {
  for (auto& cluster : w.clusters)
    for (auto& c : cluster) {
      c.observed = rng.bernoulli(0.5) ? 1 : 0;
      c.lag = static_cast<long>(rng.below(static_cast<std::size_t>(max_lag)));
    }
}

inline oracle::Joint to_oracle(const crn::JointActionView& joint) {
  oracle::Joint out(joint.size());
  for (int v = 0; v < joint.size(); ++v)
    if (joint[v]) out[v] = oracle::Move{joint[v]->relay, joint[v]->channel};
  return out;
}

}  // namespace fixtures
