#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crn/spectrum.hpp"

namespace crn {

// Request-ACK bookkeeping of one SU: per observed state, how often each
// action was played and the ACK delay accumulated behind it.
class TrustState {
 public:
  struct Cell {
    std::vector<std::int64_t> plays;
    std::vector<std::int64_t> acks;
    Eigen::VectorXd accumulated_delay;
  };

  explicit TrustState(int actions, double default_delay = 0.5);

  int actions() const { return actions_; }
  std::int64_t slots() const { return slots_; }
  std::int64_t dropped_acks() const { return dropped_; }

  // Slot n (1-based, strictly increasing) played action a in state o, with an
  // optional ACK delay credited to the same (o, a).
  void record_slot(std::uint64_t state, int action, std::optional<double> ack_delay, std::int64_t n);

  // Opens a request for (o, a) sent at `slot`; returns its id.
  std::uint64_t issue_request(std::uint64_t state, int action, Slot slot);
  // Credits the round-trip delay to the request's (o, a). Unknown ids are
  // dropped and counted; returns whether the ACK was accepted.
  bool receive_ack(std::uint64_t request, double delay);
  std::size_t pending() const { return pending_.size(); }

  // Z(o, a): share of all recorded slots in which a was played in o.
  double sampled_frequency(std::uint64_t state, int action) const;
  double accumulated_delay(std::uint64_t state, int action) const;
  // R(o, a) = C / Z; nullopt until a has both plays and ACKs in o.
  std::optional<double> delay_ratio(std::uint64_t state, int action) const;

  // sigma(o, .) = softmax(temperature / R(o, .)). Actions without an ACK
  // borrow the smallest measured R, or the default delay if none exists.
  Eigen::VectorXd trust_weights(std::uint64_t state, double temperature) const;

  const Cell* find(std::uint64_t state) const;

 private:
  struct Pending {
    std::uint64_t state;
    int action;
    Slot slot;
  };

  Cell& cell(std::uint64_t state);

  int actions_;
  double default_delay_;
  std::int64_t slots_ = 0;
  std::int64_t dropped_ = 0;
  std::uint64_t next_request_ = 0;
  std::unordered_map<std::uint64_t, Cell> cells_;
  std::unordered_map<std::uint64_t, Pending> pending_;
};

// softmax(temperature (u(a) + sigma(a) report(a))).
Eigen::VectorXd trusted_logit_response(const Eigen::VectorXd& values, const Eigen::VectorXd& reports,
                                       const Eigen::VectorXd& sigma, double temperature);

}  // namespace crn
