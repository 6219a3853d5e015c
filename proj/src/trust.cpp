#include "crn/trust.hpp"

#include <limits>
#include <stdexcept>

#include "crn/learning.hpp"

namespace crn {

TrustState::TrustState(int actions, double default_delay)
    : actions_(actions), default_delay_(default_delay) {
  if (actions < 1) throw std::invalid_argument("trust state needs at least one action");
  if (!(default_delay > 0.0)) throw std::invalid_argument("default delay must be positive");
}

TrustState::Cell& TrustState::cell(std::uint64_t state) {
  auto it = cells_.find(state);
  if (it == cells_.end()) {
    Cell c{std::vector<std::int64_t>(actions_, 0), std::vector<std::int64_t>(actions_, 0),
           Eigen::VectorXd::Zero(actions_)};
    it = cells_.emplace(state, std::move(c)).first;
  }
  return it->second;
}

const TrustState::Cell* TrustState::find(std::uint64_t state) const {
  auto it = cells_.find(state);
  return it == cells_.end() ? nullptr : &it->second;
}

void TrustState::record_slot(std::uint64_t state, int action, std::optional<double> ack_delay,
                             std::int64_t n) {
  if (n <= slots_) throw std::invalid_argument("record_slot: slot counter must increase");
  if (action < 0 || action >= actions_) throw std::out_of_range("record_slot: bad action");
  slots_ = n;
  Cell& c = cell(state);
  ++c.plays[action];
  if (ack_delay) {
    c.accumulated_delay(action) += *ack_delay;
    ++c.acks[action];
  }
}

std::uint64_t TrustState::issue_request(std::uint64_t state, int action, Slot slot) {
  const std::uint64_t id = next_request_++;
  pending_.emplace(id, Pending{state, action, slot});
  return id;
}

bool TrustState::receive_ack(std::uint64_t request, double delay) {
  auto it = pending_.find(request);
  if (it == pending_.end()) {
    ++dropped_;
    return false;
  }
  Cell& c = cell(it->second.state);
  c.accumulated_delay(it->second.action) += delay;
  ++c.acks[it->second.action];
  pending_.erase(it);
  return true;
}

double TrustState::sampled_frequency(std::uint64_t state, int action) const {
  const Cell* c = find(state);
  if (!c || slots_ == 0) return 0.0;
  return static_cast<double>(c->plays.at(action)) / static_cast<double>(slots_);
}

double TrustState::accumulated_delay(std::uint64_t state, int action) const {
  const Cell* c = find(state);
  return c ? c->accumulated_delay(action) : 0.0;
}

std::optional<double> TrustState::delay_ratio(std::uint64_t state, int action) const {
  const Cell* c = find(state);
  if (!c || c->plays.at(action) == 0 || c->acks.at(action) == 0) return std::nullopt;
  return c->accumulated_delay(action) / sampled_frequency(state, action);
}

Eigen::VectorXd TrustState::trust_weights(std::uint64_t state, double temperature) const {
  std::vector<std::optional<double>> r(actions_);
  double smallest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < actions_; ++a) {
    r[a] = delay_ratio(state, a);
    if (r[a] && *r[a] < smallest) smallest = *r[a];
  }
  if (!std::isfinite(smallest)) smallest = default_delay_;
  Eigen::VectorXd inverse(actions_);
  for (int a = 0; a < actions_; ++a) inverse(a) = 1.0 / r[a].value_or(smallest);
  return logit_response(inverse, temperature);
}

Eigen::VectorXd trusted_logit_response(const Eigen::VectorXd& values, const Eigen::VectorXd& reports,
                                       const Eigen::VectorXd& sigma, double temperature) {
  if (values.size() != reports.size() || values.size() != sigma.size())
    throw std::invalid_argument("trusted_logit_response: length mismatch");
  return logit_response(values + sigma.cwiseProduct(reports), temperature);
}

}  // namespace crn
