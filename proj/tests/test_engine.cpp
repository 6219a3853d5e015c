#include <doctest.h>

#include <cmath>

#include "crn/config.hpp"
#include "crn/engine.hpp"

using namespace crn;

namespace {

ExperimentConfig from_yaml(const std::string& text) { return parse_config_text(text, "test"); }

const char* kOneHop = R"(
spectrum: {channels: 1, lambda: 1.0e-12, mu: 1}
topology:
  arena: [20, 20]
  radius: 35
  clusters: 1
  nodes:
    - {x: 0, y: 0, role: source}
    - {x: 10, y: 0, role: sink}
flows: [[0, 1]]
run: {warmup: 10, measure: 200, checkpoints: 2}
)";

ExperimentConfig small_arena(Algorithm alg) {
  ExperimentConfig c = from_yaml(R"(
topology: {arena: [150, 150], relays: 30, flows: 3, clusters: 2, min_flow_distance: 60}
run: {warmup: 1500, measure: 1500, checkpoints: 3}
)");
  c.algorithm = alg;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("one idle hop delivers every slot after one ETT") {
  for (Algorithm alg : {Algorithm::sfp_exact, Algorithm::sfp_approx, Algorithm::baseline_ocr_ctt}) {
    ExperimentConfig c = from_yaml(kOneHop);
    c.algorithm = alg;
    const RunResults r = run_experiment(c);
    REQUIRE(r.packets.size() == 200);
    for (const PacketRecord& p : r.packets) REQUIRE(p.delay == 0.01);
    CHECK(r.mean_delay == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r.malicious_frequency == 0.0);
  }
}

TEST_CASE("zero flows: the clock runs, nobody learns") {
  const NetworkTopology t({{0, {0, 0}, Role::relay, 0}, {1, {10, 0}, Role::relay, 0}}, 35.0, 2, 1, {});
  Simulation sim(t, SpectrumModel(1, 2, 0.5, ChannelParams{}), LinkPhyParams{}, EngineOptions{});
  for (int i = 0; i < 50; ++i) sim.run_slot();
  CHECK(sim.slot() == 50);
  CHECK(sim.generated() == 0);
  CHECK(sim.learner(0, 1) == nullptr);
  CHECK(sim.results().packets.empty());
}

TEST_CASE("packet conservation and per-slot departures") {
  for (Algorithm alg : {Algorithm::sfp_exact, Algorithm::sfp_approx, Algorithm::baseline_ocr_ctt}) {
    ExperimentConfig c = small_arena(alg);
    c.run.flow_window = 3;
    const Scenario s = build_scenario(c);
    Simulation sim(s.topology, s.spectrum, s.phy, s.options);
    std::int64_t last = 0;
    for (int i = 0; i < 1000; ++i) {
      sim.run_slot();
      REQUIRE(sim.generated() == sim.delivered() + sim.in_flight() + sim.dropped());
      REQUIRE(sim.in_flight() <= 3 * static_cast<std::int64_t>(s.topology.flows().size()));
      // Each sink is fed by at most one transmitter per slot.
      REQUIRE(sim.delivered() - last <= static_cast<std::int64_t>(s.topology.sinks().size()));
      last = sim.delivered();
    }
    CHECK(sim.delivered() > 0);
    for (const PacketRecord& p : sim.deliveries()) CHECK(p.delay > 0.0);
  }
}

TEST_CASE("learner strategies stay on the simplex") {
  const Scenario s = build_scenario(small_arena(Algorithm::sfp_approx));
  Simulation sim(s.topology, s.spectrum, s.phy, s.options);
  for (int i = 0; i < 800; ++i) sim.run_slot();
  int tables = 0;
  for (int v = 0; v < s.topology.size(); ++v)
    for (int sink : s.topology.sinks())
      if (const LearnerState* l = sim.learner(v, sink))
        for (const auto& [key, t] : l->tables()) {
          REQUIRE(t.strategy.minCoeff() >= 0.0);
          REQUIRE(std::abs(t.strategy.sum() - 1.0) < 1e-9);
          ++tables;
        }
  CHECK(tables > 0);
}

TEST_CASE("same seed, same results") {
  ExperimentConfig c = small_arena(Algorithm::sfp_approx);
  c.trust.enabled = true;
  c.adversary.per_source = 1;
  const RunResults a = run_experiment(c);
  const RunResults b = run_experiment(c);
  REQUIRE(a.packets.size() == b.packets.size());
  for (std::size_t i = 0; i < a.packets.size(); ++i) {
    CHECK(a.packets[i].delay == b.packets[i].delay);
    CHECK(a.packets[i].slot == b.packets[i].slot);
  }
  REQUIRE(a.strategies.size() == b.strategies.size());
  for (std::size_t i = 0; i < a.strategies.size(); ++i) CHECK(a.strategies[i].prob == b.strategies[i].prob);
  CHECK(a.malicious_frequency == b.malicious_frequency);

  c.seed = 5;
  CHECK(run_experiment(c).mean_delay != a.mean_delay);
}

TEST_CASE("malicious connection frequency extremes") {
  ExperimentConfig c = from_yaml(R"(
topology:
  arena: [60, 20]
  radius: 30
  clusters: 1
  nodes:
    - {x: 0, y: 0, role: source}
    - {x: 25, y: 0, role: malicious_relay}
    - {x: 50, y: 0, role: sink}
flows: [[0, 2]]
run: {warmup: 200, measure: 300}
)");
  CHECK(run_experiment(c).malicious_frequency == 1.0);
  c.topology.nodes[1].role = Role::relay;
  CHECK(run_experiment(c).malicious_frequency == 0.0);
}

TEST_CASE("measurement window length barely moves a converged mean") {
  ExperimentConfig c = parse_config_text("preset: two_flows");
  const RunResults a = run_experiment(c);
  c.run.measure *= 2;
  const RunResults b = run_experiment(c);
  CHECK(std::abs(b.mean_delay / a.mean_delay - 1.0) < 0.02);
}
