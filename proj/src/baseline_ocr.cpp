#include "crn/baseline_ocr.hpp"

#include <algorithm>

namespace crn {

OcrCttRouter::OcrCttRouter(const NetworkTopology& topology) : topology_(topology) {
  for (int sink : topology.sinks()) graphs_.emplace(sink, RoutingGraph(topology, sink));
  const int n = topology.size();
  within_two_hops_.assign(n, std::vector<std::uint8_t>(n, 0));
  for (int v = 0; v < n; ++v) {
    within_two_hops_[v][v] = 1;
    for (int u : topology.neighbors(v)) {
      within_two_hops_[v][u] = 1;
      for (int w : topology.neighbors(u)) within_two_hops_[v][w] = 1;
    }
  }
}

std::optional<Action> OcrCttRouter::pick(const LinkContext& ctx, int node, int sink,
                                         const std::vector<std::vector<int>>& reserved,
                                         bool reserve) const {
  std::optional<Action> best;
  double best_score = -1.0;
  for (const Action& a : graph_for(sink).actions(node)) {
    if (reserve) {
      bool blocked = false;
      for (int w : reserved[a.channel])
        if (within_two_hops_[node][w]) {
          blocked = true;
          break;
        }
      if (blocked) continue;
    }
    const double score = distance_advancement(topology_, node, a.relay, sink) *
                         link_availability(ctx, node, a.relay, a.channel) / ett(ctx.phy, a.channel);
    // Actions are ordered by relay id then channel, so strict > keeps the
    // lowest (relay, channel) among ties.
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

BaselineAssignment OcrCttRouter::route(const LinkContext& ctx, const std::vector<int>& head_flow) const {
  const int n = topology_.size();
  BaselineAssignment out{std::vector<std::vector<BaselineHop>>(topology_.flows().size()),
                         JointActionView(n)};
  std::vector<std::vector<int>> reserved(topology_.channels());
  std::vector<std::uint8_t> handled(n, 0);

  auto max_advance_relay = [&](int node, int sink) {
    int best = -1;
    double adv = -1.0;
    for (int j : graph_for(sink).relays(node)) {
      const double d = distance_advancement(topology_, node, j, sink);
      if (d > adv) {
        adv = d;
        best = j;
      }
    }
    return best;
  };

  std::vector<Flow> flows = topology_.flows();
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) { return a.id < b.id; });
  for (std::size_t fi = 0; fi < flows.size(); ++fi) {
    const Flow& f = flows[fi];
    auto& route = out.routes[fi];
    // Each packet position starts a planned path to the sink; positions
    // nearest the sink are planned first.
    std::vector<int> holders;
    for (int v = 0; v < n; ++v)
      if (head_flow[v] == f.id) holders.push_back(v);
    std::stable_sort(holders.begin(), holders.end(), [&](int a, int b) {
      return topology_.distance(a, f.sink) < topology_.distance(b, f.sink);
    });
    std::vector<std::uint8_t> on_route(n, 0);
    for (int start : holders) {
      int node = start;
      while (node != f.sink && node >= 0 && !on_route[node]) {
        on_route[node] = 1;
        const bool holder = head_flow[node] == f.id && !handled[node];
        std::optional<Action> a = pick(ctx, node, f.sink, reserved, true);
        int next = a ? a->relay : max_advance_relay(node, f.sink);
        if (a) reserved[a->channel].push_back(node);
        if (holder) {
          handled[node] = 1;
          if (a) out.joint.set(node, *a);
        }
        route.push_back({node, a, holder});
        node = next;
      }
    }
  }

  for (int v = 0; v < n; ++v) {
    if (handled[v] || head_flow[v] < 0) continue;
    const Flow* f = nullptr;
    for (const Flow& g : flows)
      if (g.id == head_flow[v]) f = &g;
    if (!f) continue;
    handled[v] = 1;
    if (auto a = pick(ctx, v, f->sink, reserved, true)) {
      reserved[a->channel].push_back(v);
      out.joint.set(v, *a);
    }
  }
  return out;
}

BaselineAssignment ocr_ctt_route(const LinkContext& ctx, const std::vector<int>& head_flow) {
  return OcrCttRouter(ctx.topology).route(ctx, head_flow);
}

}  // namespace crn
