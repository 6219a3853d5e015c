#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

#include "crn/learning.hpp"
#include "crn/linkmodel.hpp"

namespace crn {

// A routing game frozen at one observed state, tabulated over every joint
// action. successor[p][a] is the player the action forwards to, or -1 when it
// reaches the sink. Path payoffs add the successor's path payoff to the
// local one.
struct StageGame {
  std::vector<int> num_actions;
  std::vector<PlayerRole> roles;
  std::vector<std::vector<int>> successor;
  Eigen::MatrixXd local;  // joint index x player
  Eigen::MatrixXd path;   // joint index x player

  int players() const { return static_cast<int>(num_actions.size()); }
  std::size_t joint_count() const;
  std::size_t encode(std::span<const int> actions) const;
  std::vector<int> decode(std::size_t joint) const;

  // Fills `path` from `local` and `successor`.
  void accumulate_paths();
};

// Every listed node plays every slot toward `sink` over its routing-graph
// actions; successors outside the player list are rejected.
StageGame build_stage_game(const LinkContext& ctx, const RoutingGraph& graph,
                           const std::vector<int>& nodes, const std::vector<PlayerRole>& roles);

using MixedProfile = std::vector<Eigen::VectorXd>;

// Multilinear extension of a payoff column: sum over joint actions of the
// product of the players' weights times the payoff. Weights need not sum to 1.
double expected_payoff(const StageGame& game, const Eigen::MatrixXd& table, const MixedProfile& profile,
                       int player);

struct SecondDifference {
  double value = 0.0;
  bool cancellation_warning = false;
};

// Central finite difference of player i's expected path payoff with respect
// to profile[i](a_i) and profile[j](a_j).
SecondDifference supermodularity_check(const StageGame& game, const MixedProfile& profile, int i,
                                       int a_i, int j, int a_j, double h = 1e-3);

// Per player: the most a unilateral pure deviation gains (normal players) or
// lowers the path payoff (malicious players).
std::vector<double> epsilon_ne_check(const StageGame& game, const MixedProfile& profile);

// max - min of a player's path payoff over all joint actions.
double payoff_range(const StageGame& game, int player);

struct SfpOptions {
  std::int64_t steps = 100000;
  double temperature = 0.5;
  double malicious_temperature = 0.5;
  ScheduleBand band;
  double explore_floor = 0.01;
  double explore_exponent = 0.3;
  int residual_window = 1000;
  std::uint64_t seed = 1;
  bool exact = true;
  std::vector<int> hop_rank;  // approximated variant; defaults to 1 for all
};

struct SfpTrace {
  MixedProfile strategy;
  MixedProfile values;         // exact: path values; approximated: local values
  std::vector<double> path_estimate;
  double tail_residual = 0.0;  // sum over the window of max_p |pi_p(n) - pi_p(n-1)|_inf
};

// Sampled-play SFP on a tabulated game. The exact variant learns path values
// from realized path payoffs; the approximated one learns local values and
// path estimates, responding to local value plus the successor's estimate.
SfpTrace run_sfp(const StageGame& game, const SfpOptions& options);

}  // namespace crn
