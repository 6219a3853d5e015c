#include "crn/spectrum.hpp"

#include <string>

namespace crn {

void validate(const ChannelParams& params) {
  if (!(params.lambda > 0.0) || !(params.mu > 0.0) || !std::isfinite(params.lambda) ||
      !std::isfinite(params.mu)) {
    throw ParameterError("channel rates must be positive and finite (lambda=" +
                         std::to_string(params.lambda) + ", mu=" + std::to_string(params.mu) +
                         ")");
  }
}

double idle_probability(const ChannelParams& params, std::uint8_t observed, Slot lag_slots,
                        double tau, double slot_length) {
  if (lag_slots < 0) throw ParameterError("idle_probability: negative lag");
  if (!(tau >= 0.0)) throw ParameterError("idle_probability: negative horizon");
  const Eigen::Matrix2d p = transition_matrix(params, static_cast<double>(lag_slots) * slot_length);
  return std::exp(-params.lambda * tau) * p(observed ? 1 : 0, 0);
}

SpectrumModel::SpectrumModel(int clusters, int channels, double slot_length,
                             ChannelParams uniform)
    : SpectrumModel(slot_length,
                    std::vector<std::vector<ChannelParams>>(
                        clusters < 1 ? 0 : clusters,
                        std::vector<ChannelParams>(channels < 1 ? 0 : channels, uniform))) {}

SpectrumModel::SpectrumModel(double slot_length, std::vector<std::vector<ChannelParams>> per_cluster)
    : slot_length_(slot_length), params_(std::move(per_cluster)) {
  if (!(slot_length_ > 0.0)) throw ParameterError("slot length must be positive");
  if (params_.empty()) throw ParameterError("at least one cluster is required");
  channels_ = static_cast<int>(params_.front().size());
  if (channels_ < 1) throw ParameterError("at least one channel is required");
  for (const auto& cluster : params_) {
    if (static_cast<int>(cluster.size()) != channels_)
      throw ParameterError("every cluster must list the same number of channels");
    for (const auto& p : cluster) validate(p);
  }
  cache_.assign(params_.size(),
                std::vector<std::vector<std::optional<Eigen::Matrix2d>>>(channels_));
}

const Eigen::Matrix2d& SpectrumModel::lagged(int cluster, int channel, Slot lag) const {
  if (lag < 0) throw ParameterError("negative lag");
  auto& slots = cache_.at(cluster).at(channel);
  if (static_cast<std::size_t>(lag) >= slots.size()) slots.resize(lag + 1);
  auto& entry = slots[lag];
  if (!entry) entry = transition_matrix(params(cluster, channel), static_cast<double>(lag) * slot_length_);
  return *entry;
}

double SpectrumModel::idle_probability(int cluster, int channel, std::uint8_t observed, Slot lag,
                                       double tau) const {
  if (!(tau >= 0.0)) throw ParameterError("idle_probability: negative horizon");
  return std::exp(-params(cluster, channel).lambda * tau) *
         lagged(cluster, channel, lag)(observed ? 1 : 0, 0);
}

Slot expected_last_sensed(int channels, int channel, Slot n) {
  const Slot k = channels;
  const Slot phase = ((n % k) + k) % k;
  return n - ((k + phase - channel) % k);
}

ClusterSpectrumState initial_cluster_state(int cluster_id, const std::vector<ChannelParams>& params,
                                           Rng& rng) {
  ClusterSpectrumState s;
  s.cluster_id = cluster_id;
  const int k = static_cast<int>(params.size());
  s.true_state.resize(k);
  s.last_sensed_slot.resize(k);
  for (int c = 0; c < k; ++c) {
    const double idle = stationary_distribution(params[c])(0);
    s.true_state[c] = rng.uniform() < idle ? kIdle : kBusy;
    s.last_sensed_slot[c] = expected_last_sensed(k, c, -1);
  }
  s.observed_state = s.true_state;
  return s;
}

void advance_true_states(ClusterSpectrumState& state, const std::vector<ChannelParams>& params,
                         double horizon, Rng& rng) {
  if (params.size() != state.true_state.size())
    throw ParameterError("advance_true_states: parameter count does not match channel count");
  for (std::size_t c = 0; c < params.size(); ++c) {
    const Eigen::Matrix2d p = transition_matrix(params[c], horizon);
    const double to_idle = p(state.true_state[c], 0);
    state.true_state[c] = rng.uniform() < to_idle ? kIdle : kBusy;
  }
}

void sense_update(ClusterSpectrumState& state, Slot n) {
  if (n < 0) throw ParameterError("sense_update: negative slot");
  const int k = state.channels();
  const int sensed = static_cast<int>(n % k);
  state.observed_state[sensed] = state.true_state[sensed];
  state.last_sensed_slot[sensed] = n;
}

}  // namespace crn
