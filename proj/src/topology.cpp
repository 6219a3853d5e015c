#include "crn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace crn {

const char* role_name(Role role) {
  switch (role) {
    case Role::source: return "source";
    case Role::relay: return "relay";
    case Role::sink: return "sink";
    case Role::malicious_relay: return "malicious_relay";
  }
  return "relay";
}

std::optional<Role> parse_role(const std::string& text) {
  if (text == "source") return Role::source;
  if (text == "relay") return Role::relay;
  if (text == "sink") return Role::sink;
  if (text == "malicious_relay" || text == "malicious") return Role::malicious_relay;
  return std::nullopt;
}

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

bool inside(const std::vector<Vec2>& poly, Vec2 p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

}  // namespace

int ClusterLayout::cluster_of(Vec2 p) const {
  if (!polygons.empty()) {
    for (std::size_t q = 0; q < polygons.size(); ++q)
      if (inside(polygons[q], p)) return static_cast<int>(q);
    throw TopologyError("position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") lies outside every cluster polygon");
  }
  const double width = arena_width / count;
  const int q = static_cast<int>(std::floor(p.x / width));
  return std::clamp(q, 0, count - 1);
}

NetworkTopology::NetworkTopology(std::vector<NodeRecord> nodes, double radius, int channels,
                                 int clusters, std::vector<Flow> flows)
    : nodes_(std::move(nodes)),
      radius_(radius),
      channels_(channels),
      clusters_(clusters),
      flows_(std::move(flows)) {
  if (!(radius_ > 0.0)) throw TopologyError("radius must be positive");
  if (channels_ < 1) throw TopologyError("at least one channel is required");
  if (clusters_ < 1) throw TopologyError("at least one cluster is required");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].id != i) throw TopologyError("node ids must be 0..N-1 in order");
    if (nodes_[i].cluster_id < 0 || nodes_[i].cluster_id >= clusters_)
      throw TopologyError("node " + std::to_string(i) + " has cluster " +
                          std::to_string(nodes_[i].cluster_id) + " outside 0.." +
                          std::to_string(clusters_ - 1));
  }
  neighbors_.assign(n, {});
  adjacency_.assign(n, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (crn::distance(nodes_[i].position, nodes_[j].position) <= radius_) {
        adjacency_[i][j] = adjacency_[j][i] = 1;
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
      }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  for (const Flow& f : flows_) {
    if (f.source < 0 || f.source >= n || f.sink < 0 || f.sink >= n)
      throw TopologyError("flow " + std::to_string(f.id) + " references an unknown node");
    if (nodes_[f.source].role != Role::source)
      throw TopologyError("flow " + std::to_string(f.id) + ": node " + std::to_string(f.source) +
                          " is not a source");
    if (nodes_[f.sink].role != Role::sink)
      throw TopologyError("flow " + std::to_string(f.id) + ": node " + std::to_string(f.sink) +
                          " is not a sink");
  }
}

const NodeRecord& NetworkTopology::node(int id) const {
  if (id < 0 || id >= size()) throw TopologyError("unknown node id " + std::to_string(id));
  return nodes_[id];
}

const std::vector<int>& NetworkTopology::neighbors(int id) const {
  if (id < 0 || id >= size()) throw TopologyError("unknown node id " + std::to_string(id));
  return neighbors_[id];
}

bool NetworkTopology::adjacent(int a, int b) const { return adjacency_.at(a).at(b) != 0; }

double NetworkTopology::distance(int a, int b) const {
  return crn::distance(node(a).position, node(b).position);
}

std::vector<int> NetworkTopology::sinks() const {
  std::vector<int> out;
  for (const Flow& f : flows_) out.push_back(f.sink);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double distance_advancement(const NetworkTopology& topology, int i, int j, int sink) {
  return topology.distance(i, sink) - topology.distance(j, sink);
}

std::vector<Action> action_set(const NetworkTopology& topology, int i, int sink) {
  std::vector<Action> out;
  for (int j : topology.neighbors(i)) {
    if (distance_advancement(topology, i, j, sink) < 0.0) continue;
    for (int k = 0; k < topology.channels(); ++k) out.push_back({j, k});
  }
  return out;
}

RoutingGraph::RoutingGraph(const NetworkTopology& topology, int sink) : sink_(sink) {
  const int n = topology.size();
  if (topology.node(sink).role != Role::sink)
    throw TopologyError("node " + std::to_string(sink) + " is not a sink");
  relays_.assign(n, {});
  actions_.assign(n, {});
  hop_rank_.assign(n, -1);

  // Candidate hops before the reachability filter. Every admissible hop
  // strictly decreases (distance, id) lexicographically, so processing nodes
  // in that order sees each target's status before its upstream neighbors.
  std::vector<std::vector<int>> candidates(n);
  for (int i = 0; i < n; ++i) {
    if (i == sink) continue;
    const Role role = topology.node(i).role;
    if (role == Role::sink) continue;
    for (int j : topology.neighbors(i)) {
      const Role target = topology.node(j).role;
      const bool forwarding = target == Role::relay || target == Role::malicious_relay;
      if (!forwarding && j != sink) continue;
      const double adv = distance_advancement(topology, i, j, sink);
      if (adv > 0.0 || (adv == 0.0 && j < i)) candidates[i].push_back(j);
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = topology.distance(a, sink), db = topology.distance(b, sink);
    return da != db ? da < db : a < b;
  });
  hop_rank_[sink] = 0;
  for (int i : order) {
    if (i == sink) continue;
    int best = -1;
    for (int j : candidates[i]) {
      if (hop_rank_[j] < 0) continue;
      relays_[i].push_back(j);
      if (best < 0 || hop_rank_[j] + 1 < best) best = hop_rank_[j] + 1;
    }
    hop_rank_[i] = best;
    for (int j : relays_[i])
      for (int k = 0; k < topology.channels(); ++k) actions_[i].push_back({j, k});
  }
}

int RoutingGraph::max_hop_rank() const {
  return *std::max_element(hop_rank_.begin(), hop_rank_.end());
}

std::vector<int> RoutingGraph::participants(const std::vector<int>& sources) const {
  std::vector<std::uint8_t> seen(relays_.size(), 0);
  std::deque<int> queue;
  for (int s : sources)
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : relays_[i])
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i] && static_cast<int>(i) != sink_) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

Vec2 random_point(const GeneratorSpec& spec, Rng& rng) {
  return {rng.uniform() * spec.arena_width, rng.uniform() * spec.arena_height};
}

bool all_flows_feasible(const NetworkTopology& t) {
  for (int sink : t.sinks()) {
    RoutingGraph g(t, sink);
    for (const Flow& f : t.flows())
      if (f.sink == sink && !g.reaches_sink(f.source)) return false;
  }
  return true;
}

}  // namespace

NetworkTopology generate_topology(const GeneratorSpec& spec, Rng& rng) {
  if (spec.flows < 0 || spec.relays < 0) throw TopologyError("negative node counts");
  ClusterLayout layout = spec.layout;
  layout.arena_width = spec.arena_width;
  layout.arena_height = spec.arena_height;
  const int clusters = layout.polygons.empty() ? layout.count : static_cast<int>(layout.polygons.size());
  const int f = spec.flows;
  // Attackers draw from their own stream so the honest deployment for a seed
  // does not depend on how many attackers are placed.
  Rng placement(rng.next());

  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<NodeRecord> nodes;
    std::vector<Vec2> sources, sinks;
    for (int i = 0; i < f; ++i) {
      Vec2 s = random_point(spec, rng), d = random_point(spec, rng);
      int tries = 0;
      while (distance(s, d) < spec.min_flow_distance && tries++ < 1000) d = random_point(spec, rng);
      sources.push_back(s);
      sinks.push_back(d);
    }
    for (int i = 0; i < f; ++i) nodes.push_back({i, sources[i], Role::source, 0});
    for (int i = 0; i < f; ++i) nodes.push_back({f + i, sinks[i], Role::sink, 0});
    for (int r = 0; r < spec.relays; ++r)
      nodes.push_back({2 * f + r, random_point(spec, rng), Role::relay, 0});
    for (auto& n : nodes) n.cluster_id = layout.cluster_of(n.position);
    std::vector<Flow> flows;
    for (int i = 0; i < f; ++i) flows.push_back({i, i, f + i});
    NetworkTopology honest(nodes, spec.radius, spec.channels, clusters, flows);
    if (!all_flows_feasible(honest)) continue;
    if (spec.malicious_per_source == 0) return honest;

    // Attackers sit in each source's disk, closer to the source's sink and
    // able to reach it, so they are admissible first hops.
    bool placed_all = true;
    for (int i = 0; i < f && placed_all; ++i) {
      for (int m = 0; m < spec.malicious_per_source; ++m) {
        bool placed = false;
        for (int tries = 0; tries < 2000 && !placed; ++tries) {
          const double r = spec.radius * std::sqrt(placement.uniform());
          const double th = 2.0 * 3.14159265358979323846 * placement.uniform();
          const Vec2 p{sources[i].x + r * std::cos(th), sources[i].y + r * std::sin(th)};
          if (p.x < 0 || p.y < 0 || p.x > spec.arena_width || p.y > spec.arena_height) continue;
          if (!(distance(sources[i], sinks[i]) - distance(p, sinks[i]) > 0.0)) continue;
          auto trial = nodes;
          trial.push_back({static_cast<int>(nodes.size()), p, Role::malicious_relay,
                           layout.cluster_of(p)});
          NetworkTopology t(trial, spec.radius, spec.channels, clusters, flows);
          RoutingGraph g(t, f + i);
          if (!g.reaches_sink(static_cast<int>(nodes.size()))) continue;
          nodes = std::move(trial);
          placed = true;
        }
        if (!placed) placed_all = false;
      }
    }
    if (!placed_all) continue;
    NetworkTopology full(nodes, spec.radius, spec.channels, clusters, flows);
    if (all_flows_feasible(full)) return full;
  }
  throw TopologyError("no feasible topology after " + std::to_string(spec.max_attempts) +
                      " attempts");
}

NetworkTopology without_malicious(const NetworkTopology& topology) {
  std::vector<NodeRecord> kept;
  for (const auto& n : topology.nodes()) {
    if (n.role == Role::malicious_relay) continue;
    if (n.id != static_cast<int>(kept.size()))
      throw TopologyError("malicious relays must carry the highest ids");
    kept.push_back(n);
  }
  return NetworkTopology(std::move(kept), topology.radius(), topology.channels(),
                         topology.clusters(), topology.flows());
}

}  // namespace crn
