#include "crn/linkmodel.hpp"

#include <algorithm>
#include <string>

namespace crn {

double ett(const LinkPhyParams& phy, int channel) {
  if (phy.fixed_ett) {
    if (!(*phy.fixed_ett > 0.0)) throw InfeasibleLink("ETT must be positive");
    return *phy.fixed_ett;
  }
  if (!(phy.rate > 0.0) || !(phy.packet_bits > 0.0))
    throw InfeasibleLink("packet length and rate must be positive");
  const double pe = channel < static_cast<int>(phy.error_rate.size()) ? phy.error_rate[channel] : 0.0;
  if (!(pe >= 0.0) || !(pe < 1.0))
    throw InfeasibleLink("channel " + std::to_string(channel) + " error rate " +
                         std::to_string(pe) + " leaves no usable link");
  return phy.packet_bits / (phy.rate * (1.0 - pe));
}

double link_availability(const LinkContext& ctx, int i, int j, int channel) {
  const double tau = ctx.spectrum.slot_length();
  const int qi = ctx.topology.node(i).cluster_id;
  const int qj = ctx.topology.node(j).cluster_id;
  auto idle = [&](int q) {
    const ClusterSpectrumState& c = ctx.clusters[q];
    return ctx.spectrum.idle_probability(q, channel, c.observed_state[channel],
                                         c.lag(channel, ctx.slot), tau);
  };
  if (qi == qj) return idle(qi);
  return idle(qi) * idle(qj);
}

namespace {

bool on_channel(const JointActionView& joint, int m, int channel) {
  const auto& a = joint[m];
  return a && a->channel == channel;
}

}  // namespace

std::pair<int, int> rts_success_probs(const JointActionView& joint, const NetworkTopology& topology,
                                      int i, int j, int channel) {
  int sender = 1;
  for (int m : topology.neighbors(i))
    if (on_channel(joint, m, channel)) {
      sender = 0;
      break;
    }
  int receiver = 1;
  for (int m : topology.neighbors(j))
    if (m != i && on_channel(joint, m, channel)) {
      receiver = 0;
      break;
    }
  return {sender, receiver};
}

int contention_load(const JointActionView& joint, const NetworkTopology& topology, int i) {
  int load = 0;
  for (int m : topology.neighbors(i)) {
    const auto& a = joint[m];
    if (!a || a->relay != i) continue;
    const auto [s, r] = rts_success_probs(joint, topology, m, i, a->channel);
    load += s * r;
  }
  return load;
}

double expected_link_delay(const LinkContext& ctx, const JointActionView& joint, int i, Action a) {
  const double t = ctx.spectrum.slot_length();
  const auto [s, r] = rts_success_probs(joint, ctx.topology, i, a.relay, a.channel);
  const int negotiated = s * r;
  if (negotiated == 0) return t;
  const double p_free = link_availability(ctx, i, a.relay, a.channel);
  const int load = std::max(contention_load(joint, ctx.topology, i), 1);
  return t * (1.0 - p_free) + load * ett(ctx.phy, a.channel) * p_free;
}

double expected_link_delay(const LinkContext& ctx, const JointActionView& joint, int i) {
  if (!joint[i]) throw std::invalid_argument("node " + std::to_string(i) + " has no action");
  return expected_link_delay(ctx, joint, i, *joint[i]);
}

double local_utility(const LinkContext& ctx, const JointActionView& joint, int i, Action a,
                     int sink) {
  const double adv = distance_advancement(ctx.topology, i, a.relay, sink);
  if (adv <= 0.0) return 0.0;
  return adv / expected_link_delay(ctx, joint, i, a);
}

double local_utility(const LinkContext& ctx, const JointActionView& joint, int i, int sink) {
  if (!joint[i]) throw std::invalid_argument("node " + std::to_string(i) + " has no action");
  return local_utility(ctx, joint, i, *joint[i], sink);
}

}  // namespace crn
