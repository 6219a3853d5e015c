#include "crn/stage_game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "crn/rng.hpp"

namespace crn {

std::size_t StageGame::joint_count() const {
  std::size_t n = 1;
  for (int m : num_actions) n *= static_cast<std::size_t>(m);
  return n;
}

std::size_t StageGame::encode(std::span<const int> actions) const {
  std::size_t idx = 0;
  for (int p = players() - 1; p >= 0; --p) idx = idx * num_actions[p] + actions[p];
  return idx;
}

std::vector<int> StageGame::decode(std::size_t joint) const {
  std::vector<int> a(players());
  for (int p = 0; p < players(); ++p) {
    a[p] = static_cast<int>(joint % num_actions[p]);
    joint /= num_actions[p];
  }
  return a;
}

void StageGame::accumulate_paths() {
  const int np = players();
  path.resize(local.rows(), np);
  for (Eigen::Index row = 0; row < local.rows(); ++row) {
    const std::vector<int> a = decode(static_cast<std::size_t>(row));
    std::vector<int> state(np, 0);  // 0 unvisited, 1 in progress, 2 done
    std::vector<double> value(np, 0.0);
    auto visit = [&](auto&& self, int p) -> double {
      if (state[p] == 2) return value[p];
      if (state[p] == 1) throw std::invalid_argument("stage game successors form a cycle");
      state[p] = 1;
      const int next = successor[p][a[p]];
      value[p] = local(row, p) + (next < 0 ? 0.0 : self(self, next));
      state[p] = 2;
      return value[p];
    };
    for (int p = 0; p < np; ++p) path(row, p) = visit(visit, p);
  }
}

StageGame build_stage_game(const LinkContext& ctx, const RoutingGraph& graph,
                           const std::vector<int>& nodes, const std::vector<PlayerRole>& roles) {
  if (nodes.size() != roles.size()) throw std::invalid_argument("one role per player is required");
  StageGame g;
  g.roles = roles;
  const int np = static_cast<int>(nodes.size());
  std::vector<int> index(ctx.topology.size(), -1);
  for (int p = 0; p < np; ++p) index[nodes[p]] = p;
  for (int p = 0; p < np; ++p) {
    const auto& acts = graph.actions(nodes[p]);
    if (acts.empty())
      throw std::invalid_argument("node " + std::to_string(nodes[p]) + " has no admissible action");
    g.num_actions.push_back(static_cast<int>(acts.size()));
    std::vector<int> succ;
    for (const Action& a : acts) {
      if (a.relay == graph.sink()) {
        succ.push_back(-1);
      } else if (index[a.relay] >= 0) {
        succ.push_back(index[a.relay]);
      } else {
        throw std::invalid_argument("relay " + std::to_string(a.relay) + " of node " +
                                    std::to_string(nodes[p]) + " is not a player");
      }
    }
    g.successor.push_back(std::move(succ));
  }
  const std::size_t rows = g.joint_count();
  g.local.resize(static_cast<Eigen::Index>(rows), np);
  JointActionView joint(ctx.topology.size());
  for (std::size_t row = 0; row < rows; ++row) {
    const std::vector<int> a = g.decode(row);
    for (int p = 0; p < np; ++p) joint.set(nodes[p], graph.actions(nodes[p])[a[p]]);
    for (int p = 0; p < np; ++p)
      g.local(static_cast<Eigen::Index>(row), p) = local_utility(ctx, joint, nodes[p], graph.sink());
  }
  g.accumulate_paths();
  return g;
}

double expected_payoff(const StageGame& game, const Eigen::MatrixXd& table, const MixedProfile& profile,
                       int player) {
  double total = 0.0;
  const std::size_t rows = game.joint_count();
  for (std::size_t row = 0; row < rows; ++row) {
    const std::vector<int> a = game.decode(row);
    double w = 1.0;
    for (int p = 0; p < game.players() && w != 0.0; ++p) w *= profile[p](a[p]);
    total += w * table(static_cast<Eigen::Index>(row), player);
  }
  return total;
}

SecondDifference supermodularity_check(const StageGame& game, const MixedProfile& profile, int i,
                                       int a_i, int j, int a_j, double h) {
  if (i == j) throw std::invalid_argument("supermodularity_check needs two distinct players");
  auto at = [&](double di, double dj) {
    MixedProfile p = profile;
    p[i](a_i) += di;
    p[j](a_j) += dj;
    return expected_payoff(game, game.path, p, i);
  };
  SecondDifference out;
  out.value = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
  // Four O(1) payoffs combine into an O(h^2) quantity; below this h the
  // rounding error of the payoffs dominates the difference.
  out.cancellation_warning = h < 1e-5;
  return out;
}

std::vector<double> epsilon_ne_check(const StageGame& game, const MixedProfile& profile) {
  std::vector<double> regret(game.players(), 0.0);
  for (int p = 0; p < game.players(); ++p) {
    const double current = expected_payoff(game, game.path, profile, p);
    double best = game.roles[p] == PlayerRole::normal ? current : -current;
    for (int a = 0; a < game.num_actions[p]; ++a) {
      MixedProfile dev = profile;
      dev[p] = Eigen::VectorXd::Zero(game.num_actions[p]);
      dev[p](a) = 1.0;
      const double v = expected_payoff(game, game.path, dev, p);
      best = std::max(best, game.roles[p] == PlayerRole::normal ? v : -v);
    }
    regret[p] = game.roles[p] == PlayerRole::normal ? best - current : best + current;
  }
  return regret;
}

double payoff_range(const StageGame& game, int player) {
  return game.path.col(player).maxCoeff() - game.path.col(player).minCoeff();
}

SfpTrace run_sfp(const StageGame& game, const SfpOptions& options) {
  const int np = game.players();
  std::vector<int> rank = options.hop_rank;
  if (rank.empty()) rank.assign(np, 1);
  const int max_rank = *std::max_element(rank.begin(), rank.end());
  const RateSchedule rates = make_rate_schedules(std::max(max_rank, 1), options.band);
  Rng rng = Rng::derive(options.seed, "stage-sfp");

  std::vector<StateTable> tables;
  for (int p = 0; p < np; ++p) tables.emplace_back(game.num_actions[p]);
  std::vector<int> played(np);
  std::vector<double> window;
  SfpTrace trace;

  for (std::int64_t n = 1; n <= options.steps; ++n) {
    const double eps = exploration_rate(n, options.explore_floor, options.explore_exponent);
    for (int p = 0; p < np; ++p) {
      const auto& pi = tables[p].strategy;
      played[p] = rng.uniform() < eps
                      ? static_cast<int>(rng.below(game.num_actions[p]))
                      : static_cast<int>(rng.categorical(std::span<const double>(pi.data(), pi.size())));
    }
    const auto row = static_cast<Eigen::Index>(game.encode(played));
    const Eigen::MatrixXd& signal = options.exact ? game.path : game.local;

    // Reports are read before any path estimate moves this step.
    std::vector<Eigen::VectorXd> reports(np);
    std::vector<std::vector<std::optional<double>>> report_slots(np);
    for (int p = 0; p < np; ++p) {
      reports[p] = Eigen::VectorXd::Zero(game.num_actions[p]);
      for (int a = 0; a < game.num_actions[p]; ++a) {
        const int next = game.successor[p][a];
        reports[p](a) = next < 0 ? 0.0 : tables[next].path_estimate;
        report_slots[p].push_back(reports[p](a));
      }
    }
    for (int p = 0; p < np; ++p) {
      StateTable& t = tables[p];
      ++t.visits;
      const std::int64_t count = ++t.action_visits[played[p]];
      update_action_value(t, played[p], signal(row, p), rates.alpha(count));
    }
    if (!options.exact)
      for (int p = 0; p < np; ++p)
        update_path_estimate(tables[p], report_slots[p], rates.gamma(rank[p], n));

    double step_residual = 0.0;
    for (int p = 0; p < np; ++p) {
      StateTable& t = tables[p];
      const Eigen::VectorXd values =
          options.exact ? Eigen::VectorXd(t.action_value) : Eigen::VectorXd(t.action_value + reports[p]);
      const Eigen::VectorXd br =
          game.roles[p] == PlayerRole::normal
              ? logit_response(values, options.temperature)
              : logit_response(values, options.malicious_temperature, PlayerRole::malicious);
      const Eigen::VectorXd before = t.strategy;
      update_strategy(t, br, rates.beta(n));
      step_residual = std::max(step_residual, (t.strategy - before).cwiseAbs().maxCoeff());
    }
    if (n > options.steps - options.residual_window) trace.tail_residual += step_residual;
  }
  for (int p = 0; p < np; ++p) {
    trace.strategy.push_back(tables[p].strategy);
    trace.values.push_back(tables[p].action_value);
    trace.path_estimate.push_back(tables[p].path_estimate);
  }
  return trace;
}

}  // namespace crn
