#include "crn/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "crn/engine.hpp"
#include "crn/stage_game.hpp"

namespace crn {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

NetworkTopology toy_network() {
  std::vector<NodeRecord> nodes{
      {0, {0, 0}, Role::source, 0},   {1, {20, 8}, Role::relay, 0},   {2, {20, -8}, Role::relay, 1},
      {3, {40, 0}, Role::relay, 1},   {4, {60, 0}, Role::sink, 1},
  };
  return NetworkTopology(nodes, 25.0, 2, 2, {{0, 0, 4}});
}

}  // namespace

std::vector<DiagnosticResult> run_diagnostics() {
  std::vector<DiagnosticResult> out;
  const ChannelParams params;

  double row_err = 0.0, ck_err = 0.0;
  for (double t : {0.0, 0.1, 0.5, 1.7, 10.0}) {
    const Eigen::Matrix2d p = transition_matrix(params, t);
    row_err = std::max(row_err, (p.rowwise().sum().array() - 1.0).abs().maxCoeff());
    const Eigen::Matrix2d q = transition_matrix(params, 0.3) * transition_matrix(params, t);
    ck_err = std::max(ck_err, (q - transition_matrix(params, t + 0.3)).cwiseAbs().maxCoeff());
  }
  out.push_back({"transition rows sum to one", row_err < 1e-12, fmt("max error %.3g", row_err)});
  out.push_back({"Chapman-Kolmogorov", ck_err < 1e-10, fmt("max error %.3g", ck_err)});

  Rng rng = Rng::derive(1, "diag");
  ClusterSpectrumState cs = initial_cluster_state(0, {params, params, params}, rng);
  bool lags_ok = true;
  for (Slot n = 0; n < 50; ++n) {
    sense_update(cs, n);
    for (int k = 0; k < 3; ++k) lags_ok = lags_ok && cs.last_sensed_slot[k] == expected_last_sensed(3, k, n);
    lags_ok = lags_ok && cs.observed_state[n % 3] == cs.true_state[n % 3];
    advance_true_states(cs, {params, params, params}, 0.5, rng);
  }
  out.push_back({"round-robin sensing lags", lags_ok, "50 slots, 3 channels"});

  EngineOptions opt;
  opt.warmup = 2000;
  opt.measure = 1000;
  opt.trust = true;
  Simulation sim(toy_network(), SpectrumModel(2, 2, 0.5, params), LinkPhyParams{}, opt);
  sim.run();
  double simplex_err = 0.0, trust_err = 0.0;
  for (int v = 0; v < 4; ++v) {
    if (const LearnerState* l = sim.learner(v, 4))
      for (const auto& [key, t] : l->tables()) {
        simplex_err = std::max(simplex_err, std::abs(t.strategy.sum() - 1.0));
        if (t.strategy.minCoeff() < 0.0) simplex_err = 1.0;
      }
    if (const TrustState* tr = sim.trust(v, 4))
      if (const LearnerState* l = sim.learner(v, 4))
        for (const auto& [key, t] : l->tables()) trust_err = std::max(trust_err, std::abs(tr->trust_weights(key, 1.0).sum() - 1.0));
  }
  out.push_back({"strategies stay on the simplex", simplex_err < 1e-9, fmt("max error %.3g", simplex_err)});
  out.push_back({"trust weights sum to one", trust_err < 1e-9, fmt("max error %.3g", trust_err)});
  const bool conserved = sim.generated() == sim.delivered() + sim.in_flight() + sim.dropped();
  out.push_back({"packet conservation", conserved, std::to_string(sim.generated()) + " generated"});

  const NetworkTopology topo = toy_network();
  const SpectrumModel spectrum(2, 2, 0.5, params);
  std::vector<ClusterSpectrumState> clusters;
  for (int q = 0; q < 2; ++q) clusters.push_back(initial_cluster_state(q, spectrum.cluster_params(q), rng));
  const LinkPhyParams phy;
  const LinkContext ctx{topo, spectrum, clusters, 0, phy};
  const RoutingGraph graph(topo, 4);
  const std::vector<int> players{0, 1, 2, 3};
  const StageGame game = build_stage_game(ctx, graph, players, std::vector<PlayerRole>(4, PlayerRole::normal));
  MixedProfile profile;
  for (int p = 0; p < game.players(); ++p)
    profile.push_back(Eigen::VectorXd::Constant(game.num_actions[p], 1.0 / game.num_actions[p]));
  double worst = 0.0;
  for (int i = 0; i < game.players(); ++i)
    for (int j = 0; j < game.players(); ++j) {
      if (i == j) continue;
      for (int a = 0; a < game.num_actions[i]; ++a)
        for (int b = 0; b < game.num_actions[j]; ++b)
          worst = std::min(worst, supermodularity_check(game, profile, i, a, j, b).value);
    }
  out.push_back({"second cross differences non-negative", worst >= -1e-8, fmt("min %.3g", worst)});
  return out;
}

}  // namespace crn
