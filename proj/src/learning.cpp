#include "crn/learning.hpp"

#include <string>

namespace crn {

double RateSchedule::gamma(int rank, std::int64_t n) const {
  if (gamma_exponents.empty()) throw ScheduleError("no path-estimate schedule");
  const int r = std::clamp(rank, 1, static_cast<int>(gamma_exponents.size()));
  return step(n, gamma_exponents[r - 1]);
}

RateSchedule make_rate_schedules(int max_hop_rank, const ScheduleBand& band) {
  if (max_hop_rank < 1) throw ScheduleError("max_hop_rank must be at least 1");
  auto in_range = [](double e) { return e > 0.5 && e <= 1.0; };
  if (!in_range(band.alpha_exponent) || !in_range(band.beta_exponent) ||
      !in_range(band.gamma_near) || !in_range(band.gamma_far))
    throw ScheduleError("every exponent must lie in (0.5, 1]");
  if (!(band.beta_exponent > band.gamma_near && band.gamma_near >= band.gamma_far &&
        band.gamma_far > band.alpha_exponent))
    throw ScheduleError("exponents must satisfy beta > gamma_near >= gamma_far > alpha");
  RateSchedule s;
  s.alpha_exponent = band.alpha_exponent;
  s.beta_exponent = band.beta_exponent;
  if (max_hop_rank == 1) {
    s.gamma_exponents = {band.gamma_near};
    return s;
  }
  const double spacing = (band.gamma_near - band.gamma_far) / (max_hop_rank - 1);
  if (spacing < band.min_spacing)
    throw ScheduleError("widen the gamma band: " + std::to_string(max_hop_rank) +
                        " hop ranks leave spacing " + std::to_string(spacing) + " below " +
                        std::to_string(band.min_spacing));
  for (int r = 0; r < max_hop_rank; ++r) s.gamma_exponents.push_back(band.gamma_near - r * spacing);
  return s;
}

StateTable::StateTable(int actions)
    : action_value(Eigen::VectorXd::Zero(actions)),
      strategy(actions > 0 ? Eigen::VectorXd::Constant(actions, 1.0 / actions)
                           : Eigen::VectorXd()),
      action_visits(actions, 0),
      last_reports(Eigen::VectorXd::Zero(actions)) {}

LearnerState::LearnerState(int actions, double temperature, PlayerRole role)
    : actions_(actions), temperature_(temperature), role_(role) {
  if (actions < 1) throw std::invalid_argument("a learner needs at least one action");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
}

StateTable& LearnerState::table(std::uint64_t state) {
  auto it = tables_.find(state);
  if (it == tables_.end()) it = tables_.emplace(state, StateTable(actions_)).first;
  return it->second;
}

const StateTable* LearnerState::find(std::uint64_t state) const {
  auto it = tables_.find(state);
  return it == tables_.end() ? nullptr : &it->second;
}

void update_action_value(StateTable& table, int action, double utility, double alpha) {
  double& v = table.action_value(action);
  v += alpha * (utility - v);
}

void update_path_estimate(StateTable& table, std::span<const std::optional<double>> reports,
                          double gamma) {
  if (static_cast<int>(reports.size()) != table.actions())
    throw std::invalid_argument("one report slot per action is required");
  double target = 0.0;
  for (int a = 0; a < table.actions(); ++a) {
    if (reports[a]) {
      table.last_reports(a) = *reports[a];
    } else {
      ++table.stale_reports;
    }
    target += table.strategy(a) * (table.action_value(a) + table.last_reports(a));
  }
  table.path_estimate += gamma * (target - table.path_estimate);
}

void update_strategy(StateTable& table, const Eigen::VectorXd& best_response, double beta) {
  if (best_response.size() != table.strategy.size())
    throw std::invalid_argument("best response has the wrong length");
  table.strategy += beta * (best_response - table.strategy);
  table.strategy = table.strategy.cwiseMax(0.0);
  table.strategy /= table.strategy.sum();
}

double exploration_rate(std::int64_t n, double floor, double exponent) {
  return std::max(floor, RateSchedule::step(n, exponent));
}

}  // namespace crn
