#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/rng.hpp"

namespace crn {

enum class Role { source, relay, sink, malicious_relay };

const char* role_name(Role role);
std::optional<Role> parse_role(const std::string& text);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

double distance(Vec2 a, Vec2 b);

struct NodeRecord {
  int id = 0;
  Vec2 position;
  Role role = Role::relay;
  int cluster_id = 0;
  bool operator==(const NodeRecord&) const = default;
};

struct Flow {
  int id = 0;
  int source = 0;
  int sink = 0;
  bool operator==(const Flow&) const = default;
};

struct Action {
  int relay = -1;
  int channel = -1;
  auto operator<=>(const Action&) const = default;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry of the spectrum activity clusters. Without polygons the arena is
// cut into `count` equal-width vertical strips.
struct ClusterLayout {
  int count = 1;
  double arena_width = 250.0;
  double arena_height = 250.0;
  std::vector<std::vector<Vec2>> polygons;

  int cluster_of(Vec2 p) const;
  bool operator==(const ClusterLayout&) const = default;
};

// Disk graph over a fixed node set. Node ids are their indices.
class NetworkTopology {
 public:
  NetworkTopology(std::vector<NodeRecord> nodes, double radius, int channels, int clusters,
                  std::vector<Flow> flows);

  int size() const { return static_cast<int>(nodes_.size()); }
  const NodeRecord& node(int id) const;
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<Flow>& flows() const { return flows_; }
  double radius() const { return radius_; }
  int channels() const { return channels_; }
  int clusters() const { return clusters_; }

  // Nodes within the radius, ascending id, excluding `id` itself.
  const std::vector<int>& neighbors(int id) const;
  bool adjacent(int a, int b) const;
  double distance(int a, int b) const;
  bool is_malicious(int id) const { return node(id).role == Role::malicious_relay; }

  // Ids of sinks that terminate at least one flow, ascending.
  std::vector<int> sinks() const;

 private:
  std::vector<NodeRecord> nodes_;
  double radius_;
  int channels_;
  int clusters_;
  std::vector<Flow> flows_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<std::uint8_t>> adjacency_;
};

// D(i, sink) - D(j, sink).
double distance_advancement(const NetworkTopology& topology, int i, int j, int sink);

// Raw admissible actions: neighbors with non-negative advancement, every channel.
std::vector<Action> action_set(const NetworkTopology& topology, int i, int sink);

// Loop-free relay choices toward one sink. A hop is admissible when the target
// is a relay (honest or not) or the sink itself, it does not move away from the
// sink, equal-distance hops go to a strictly smaller id, and the target can
// still reach the sink. Nodes left without choices are dead ends.
class RoutingGraph {
 public:
  RoutingGraph(const NetworkTopology& topology, int sink);

  int sink() const { return sink_; }
  const std::vector<int>& relays(int node) const { return relays_.at(node); }
  const std::vector<Action>& actions(int node) const { return actions_.at(node); }
  bool reaches_sink(int node) const { return node == sink_ || !relays_.at(node).empty(); }

  // Fewest admissible hops to the sink; -1 when unreachable.
  int hop_rank(int node) const { return hop_rank_.at(node); }
  int max_hop_rank() const;

  // Nodes reachable from one of the given sources along admissible hops,
  // excluding the sink, ascending id.
  std::vector<int> participants(const std::vector<int>& sources) const;

 private:
  int sink_;
  std::vector<std::vector<int>> relays_;
  std::vector<std::vector<Action>> actions_;
  std::vector<int> hop_rank_;
};

struct GeneratorSpec {
  double arena_width = 250.0;
  double arena_height = 250.0;
  int relays = 100;
  int flows = 4;
  double radius = 35.0;
  int channels = 2;
  ClusterLayout layout;
  double min_flow_distance = 100.0;
  int malicious_per_source = 0;
  int max_attempts = 1000;
};

// Uniform random deployment, rejection-sampled until every flow has an
// admissible path. Ids: sources, then sinks, then relays, then malicious
// relays (one per source per unit of malicious_per_source, placed inside the
// source's disk with positive advancement).
NetworkTopology generate_topology(const GeneratorSpec& spec, Rng& rng);

// Same network with the malicious relays removed; remaining ids are unchanged
// when the malicious relays carry the highest ids.
NetworkTopology without_malicious(const NetworkTopology& topology);

}  // namespace crn
