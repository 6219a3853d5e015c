#include <doctest.h>

#include <cmath>
#include <set>

#include "crn/topology.hpp"

using namespace crn;

namespace {

NetworkTopology line(std::vector<Vec2> pos, std::vector<Role> roles, double radius = 35.0) {
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < pos.size(); ++i) nodes.push_back({static_cast<int>(i), pos[i], roles[i], 0});
  const int sink = static_cast<int>(pos.size()) - 1;
  return NetworkTopology(nodes, radius, 2, 1, {{0, 0, sink}});
}

}  // namespace

TEST_CASE("disk neighbors at the radius boundary") {
  const auto near = line({{0, 0}, {34, 0}}, {Role::source, Role::sink});
  CHECK(near.adjacent(0, 1));
  CHECK(near.neighbors(0) == std::vector<int>{1});
  const auto far = line({{0, 0}, {36, 0}}, {Role::source, Role::sink});
  CHECK_FALSE(far.adjacent(0, 1));
  CHECK(far.neighbors(1).empty());
  CHECK_THROWS(near.node(5));
}

TEST_CASE("distance advancement") {
  const auto t = line({{0, 0}, {30, 0}, {100, 0}}, {Role::source, Role::relay, Role::sink}, 80.0);
  CHECK(distance_advancement(t, 0, 1, 2) == doctest::Approx(30.0));
  CHECK(distance_advancement(t, 0, 2, 2) == doctest::Approx(100.0));
  CHECK(distance_advancement(t, 1, 1, 2) == 0.0);
}

TEST_CASE("action set is the admissible relays times the channels") {
  // Relay 2 sits behind the source and is excluded.
  const auto t = line({{0, 0}, {20, 5}, {-10, 0}, {25, -5}, {50, 0}},
                      {Role::source, Role::relay, Role::relay, Role::relay, Role::sink});
  const auto acts = action_set(t, 0, 4);
  CHECK(acts.size() == 4);
  std::set<int> relays;
  for (const Action& a : acts) relays.insert(a.relay);
  CHECK(relays == std::set<int>{1, 3});
  for (const Action& a : acts) CHECK(distance_advancement(t, 0, a.relay, 4) >= 0.0);

  const auto dead = line({{0, 0}, {-20, 0}, {60, 0}}, {Role::source, Role::relay, Role::sink});
  CHECK(action_set(dead, 0, 2).empty());
  const RoutingGraph g(dead, 2);
  CHECK_FALSE(g.reaches_sink(0));
  CHECK(g.hop_rank(0) == -1);
}

TEST_CASE("routing graph breaks equal-distance ties by id") {
  // Relays 1 and 2 are equidistant from the sink and adjacent to each other.
  const auto t = line({{0, 0}, {30, 10}, {30, -10}, {60, 0}},
                      {Role::source, Role::relay, Role::relay, Role::sink});
  const RoutingGraph g(t, 3);
  CHECK(g.relays(2) == std::vector<int>{1, 3});
  CHECK(g.relays(1) == std::vector<int>{3});
  CHECK(g.hop_rank(1) == 1);
  CHECK(g.hop_rank(0) == 2);
  CHECK(g.max_hop_rank() == 2);
  CHECK(g.participants({0}) == std::vector<int>{0, 1, 2});
}

TEST_CASE("sources never relay") {
  std::vector<NodeRecord> nodes{{0, {0, 0}, Role::source, 0},
                                {1, {20, 0}, Role::source, 0},
                                {2, {40, 0}, Role::sink, 0}};
  const NetworkTopology t(nodes, 25.0, 1, 1, {{0, 0, 2}, {1, 1, 2}});
  const RoutingGraph g(t, 2);
  CHECK(g.relays(0).empty());
  CHECK(g.relays(1) == std::vector<int>{2});
}

TEST_CASE("clusters from strips and polygons") {
  ClusterLayout strips{3, 300, 100, {}};
  CHECK(strips.cluster_of({10, 50}) == 0);
  CHECK(strips.cluster_of({150, 50}) == 1);
  CHECK(strips.cluster_of({299.9, 50}) == 2);
  ClusterLayout bands{2, 100, 100, {{{0, 50}, {100, 50}, {100, 100}, {0, 100}}, {{0, 0}, {100, 0}, {100, 50}, {0, 50}}}};
  CHECK(bands.cluster_of({10, 80}) == 0);
  CHECK(bands.cluster_of({10, 20}) == 1);
}

TEST_CASE("generated arena") {
  Rng rng(21);
  GeneratorSpec spec;
  spec.flows = 8;
  spec.layout.count = 3;
  spec.malicious_per_source = 1;
  const NetworkTopology t = generate_topology(spec, rng);
  CHECK(t.size() == 8 * 2 + 100 + 8);
  for (int a = 0; a < t.size(); ++a) {
    const Vec2 p = t.node(a).position;
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 250.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= 250.0);
    for (int b = 0; b < t.size(); ++b) {
      if (a == b) continue;
      const double d = std::hypot(p.x - t.node(b).position.x, p.y - t.node(b).position.y);
      REQUIRE(t.adjacent(a, b) == (d <= 35.0));
      REQUIRE(t.adjacent(a, b) == t.adjacent(b, a));
    }
  }
  for (const Flow& f : t.flows()) {
    CHECK(t.distance(f.source, f.sink) >= 100.0);
    CHECK(RoutingGraph(t, f.sink).reaches_sink(f.source));
  }
  for (int s = 0; s < 8; ++s) {
    const int m = t.size() - 8 + s;
    CHECK(t.is_malicious(m));
    CHECK(t.adjacent(t.flows()[s].source, m));
    CHECK(distance_advancement(t, t.flows()[s].source, m, t.flows()[s].sink) > 0.0);
  }

  const NetworkTopology honest = without_malicious(t);
  CHECK(honest.size() == t.size() - 8);
  for (int v = 0; v < honest.size(); ++v) CHECK(honest.node(v) == t.node(v));
}

TEST_CASE("attackers do not move the honest deployment") {
  GeneratorSpec spec;
  spec.flows = 4;
  Rng a(9), b(9);
  const NetworkTopology plain = generate_topology(spec, a);
  spec.malicious_per_source = 1;
  const NetworkTopology attacked = generate_topology(spec, b);
  for (int v = 0; v < plain.size(); ++v) CHECK(plain.node(v) == attacked.node(v));
}
