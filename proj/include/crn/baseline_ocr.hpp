#pragma once

#include <map>
#include <optional>
#include <vector>

#include "crn/linkmodel.hpp"

namespace crn {

struct BaselineHop {
  int node = -1;
  std::optional<Action> action;  // empty: no conflict-free channel, the hop stalls
  bool holds_packet = false;
};

struct BaselineAssignment {
  std::vector<std::vector<BaselineHop>> routes;  // per flow, from the source onward
  JointActionView joint;                         // actions of packet holders only
};

// Centralized greedy relay-channel assignment. Flows are handled in ascending
// id. For each packet of a flow (nearest the sink first) a route is planned
// from the packet's node to the sink, every hop picking the (relay, channel)
// maximizing advancement * P_free / ETT among channels not reserved by an
// earlier hop within two hops; each planned hop reserves its channel. Only
// packet holders transmit. A hop with no free channel stalls and the plan
// continues along the max-advancement relay.
class OcrCttRouter {
 public:
  explicit OcrCttRouter(const NetworkTopology& topology);

  // head_flow[v]: flow of the packet node v would send this slot, or -1.
  BaselineAssignment route(const LinkContext& ctx, const std::vector<int>& head_flow) const;

 private:
  const RoutingGraph& graph_for(int sink) const { return graphs_.at(sink); }
  std::optional<Action> pick(const LinkContext& ctx, int node, int sink,
                             const std::vector<std::vector<int>>& reserved, bool reserve) const;

  const NetworkTopology& topology_;
  std::map<int, RoutingGraph> graphs_;
  std::vector<std::vector<std::uint8_t>> within_two_hops_;
};

BaselineAssignment ocr_ctt_route(const LinkContext& ctx, const std::vector<int>& head_flow);

}  // namespace crn
