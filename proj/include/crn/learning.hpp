#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace crn {

enum class PlayerRole { normal, malicious };

inline constexpr double kInverseFloor = 1e-6;

// Logit (softmax) response to a value vector. The malicious branch responds to
// reciprocal values, so the smallest positive value gets the largest weight;
// values below kInverseFloor are clamped before inversion.
template <typename Derived>
Eigen::VectorXd logit_response(const Eigen::MatrixBase<Derived>& values, double temperature,
                               PlayerRole role = PlayerRole::normal) {
  if (!(temperature >= 0.0)) throw std::invalid_argument("logit_response: negative temperature");
  const Eigen::Index m = values.size();
  if (m == 0) throw std::invalid_argument("logit_response: empty value vector");
  Eigen::VectorXd z(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double v = values(a);
    if (!std::isfinite(v)) throw std::invalid_argument("logit_response: non-finite value");
    z(a) = temperature * (role == PlayerRole::normal ? v : 1.0 / std::max(v, kInverseFloor));
  }
  z.array() -= z.maxCoeff();
  z = z.array().exp();
  return z / z.sum();
}

// Step-size sequences n^-e for the value (alpha), per-hop-rank path (gamma)
// and strategy (beta) recursions. Rank 1 is the closest to the sink.
struct RateSchedule {
  double alpha_exponent = 0.55;
  double beta_exponent = 0.95;
  std::vector<double> gamma_exponents;

  double alpha(std::int64_t n) const { return step(n, alpha_exponent); }
  double beta(std::int64_t n) const { return step(n, beta_exponent); }
  double gamma(int rank, std::int64_t n) const;

  static double step(std::int64_t n, double exponent) {
    return std::pow(static_cast<double>(std::max<std::int64_t>(n, 1)), -exponent);
  }
};

struct ScheduleBand {
  double alpha_exponent = 0.55;
  double beta_exponent = 0.95;
  double gamma_near = 0.85;
  double gamma_far = 0.62;
  double min_spacing = 0.005;

  bool operator==(const ScheduleBand&) const = default;
};

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Gamma exponents spaced linearly from gamma_near (rank 1) to gamma_far
// (rank max_hop_rank). Throws when the band is too narrow for the rank count
// or the ordering beta < gamma < alpha (in decay speed) is violated.
RateSchedule make_rate_schedules(int max_hop_rank, const ScheduleBand& band = {});

// Per observed state: values, strategy, path estimate and counters.
struct StateTable {
  Eigen::VectorXd action_value;
  Eigen::VectorXd strategy;
  double path_estimate = 0.0;
  std::vector<std::int64_t> action_visits;
  std::int64_t visits = 0;
  std::int64_t path_updates = 0;
  std::int64_t strategy_updates = 0;
  Eigen::VectorXd last_reports;
  std::int64_t stale_reports = 0;

  explicit StateTable(int actions = 0);
  int actions() const { return static_cast<int>(strategy.size()); }
};

// One learner's tables, created on first visit with a uniform strategy and
// zero values.
class LearnerState {
 public:
  LearnerState(int actions, double temperature, PlayerRole role = PlayerRole::normal);

  int actions() const { return actions_; }
  double temperature() const { return temperature_; }
  PlayerRole role() const { return role_; }

  StateTable& table(std::uint64_t state);
  const StateTable* find(std::uint64_t state) const;
  const std::unordered_map<std::uint64_t, StateTable>& tables() const { return tables_; }

 private:
  int actions_;
  double temperature_;
  PlayerRole role_;
  std::unordered_map<std::uint64_t, StateTable> tables_;
};

// u(o, a) += alpha (u - u(o, a)).
void update_action_value(StateTable& table, int action, double utility, double alpha);

// Path estimate moves toward sum_a pi(a) (u(a) + report(a)). Missing reports
// reuse the previous value for that action and are counted as stale.
void update_path_estimate(StateTable& table, std::span<const std::optional<double>> reports,
                          double gamma);

// pi += beta (br - pi), renormalized against rounding drift.
void update_strategy(StateTable& table, const Eigen::VectorXd& best_response, double beta);

// Uniform-exploration probability for the n-th visit of a state.
double exploration_rate(std::int64_t n, double floor = 0.01, double exponent = 0.3);

}  // namespace crn
