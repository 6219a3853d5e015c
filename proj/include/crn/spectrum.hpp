#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crn/rng.hpp"

namespace crn {

using Slot = std::int64_t;

enum ChannelState : std::uint8_t { kIdle = 0, kBusy = 1 };

// Rates of a two-state PU occupancy chain. lambda is the rate of leaving Idle
// (inverse mean idle holding time), mu the rate of leaving Busy.
struct ChannelParams {
  double lambda = 5.0;
  double mu = 1.0 / 0.42;

  bool operator==(const ChannelParams&) const = default;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void validate(const ChannelParams& params);

// P(t): entry (s, s') is P(state(t) = s' | state(0) = s).
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> transition_matrix(const ChannelParams& params, Scalar t) {
  validate(params);
  if (!(t >= Scalar(0))) throw ParameterError("transition_matrix: negative elapsed time");
  const Scalar lambda = params.lambda;
  const Scalar mu = params.mu;
  const Scalar total = lambda + mu;
  const Scalar decay = std::exp(-total * t);
  Eigen::Matrix<Scalar, 2, 2> m;
  m << (mu + lambda * decay) / total, (lambda - lambda * decay) / total,
      (mu - mu * decay) / total, (lambda + mu * decay) / total;
  return m;
}

// Limit of transition_matrix as t -> infinity: (P(Idle), P(Busy)).
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 1> stationary_distribution(const ChannelParams& params) {
  validate(params);
  const Scalar total = Scalar(params.lambda) + Scalar(params.mu);
  return {Scalar(params.mu) / total, Scalar(params.lambda) / total};
}

// Probability that a channel last seen in `observed` lag_slots slots ago is
// Idle at the start of the current slot and stays Idle for tau seconds.
double idle_probability(const ChannelParams& params, std::uint8_t observed, Slot lag_slots,
                        double tau, double slot_length);

// Per-cluster, per-channel rates plus the slot length. Transition matrices for
// multiples of the slot length are memoized on first use.
class SpectrumModel {
 public:
  SpectrumModel(int clusters, int channels, double slot_length, ChannelParams uniform);
  SpectrumModel(double slot_length, std::vector<std::vector<ChannelParams>> per_cluster);

  int clusters() const { return static_cast<int>(params_.size()); }
  int channels() const { return channels_; }
  double slot_length() const { return slot_length_; }
  const ChannelParams& params(int cluster, int channel) const {
    return params_.at(cluster).at(channel);
  }
  const std::vector<ChannelParams>& cluster_params(int cluster) const {
    return params_.at(cluster);
  }

  // transition_matrix(params(q, k), lag * slot_length), cached.
  const Eigen::Matrix2d& lagged(int cluster, int channel, Slot lag) const;

  double idle_probability(int cluster, int channel, std::uint8_t observed, Slot lag,
                          double tau) const;

 private:
  double slot_length_;
  int channels_;
  std::vector<std::vector<ChannelParams>> params_;
  mutable std::vector<std::vector<std::vector<std::optional<Eigen::Matrix2d>>>> cache_;
};

// True and observed channel vectors of one spectrum activity cluster.
struct ClusterSpectrumState {
  int cluster_id = 0;
  std::vector<std::uint8_t> true_state;
  std::vector<std::uint8_t> observed_state;
  std::vector<Slot> last_sensed_slot;

  int channels() const { return static_cast<int>(true_state.size()); }
  Slot lag(int channel, Slot n) const { return n - last_sensed_slot.at(channel); }
};

// Draws true states from the stationary law and pretends a full sensing round
// completed just before slot 0, so the round-robin invariant holds at n = 0.
ClusterSpectrumState initial_cluster_state(int cluster_id, const std::vector<ChannelParams>& params,
                                           Rng& rng);

// Samples every channel's state one horizon of `horizon` seconds ahead.
void advance_true_states(ClusterSpectrumState& state, const std::vector<ChannelParams>& params,
                         double horizon, Rng& rng);

// Round-robin sensing: only channel n mod K is refreshed at slot n.
void sense_update(ClusterSpectrumState& state, Slot n);

// Slot at which channel k was last refreshed under the round-robin schedule.
Slot expected_last_sensed(int channels, int channel, Slot n);

}  // namespace crn
