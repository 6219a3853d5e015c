#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "crn/linkmodel.hpp"

namespace crn {

struct AdversaryConfig {
  std::vector<int> ids;
  int per_source = 0;  // generated topologies: attackers placed around each source
  double sh_scale = 1.0;
  bool rpu = true;
  double temperature = 0.5;
  double rpu_weight = 0.1;

  bool operator==(const AdversaryConfig&) const = default;
};

void validate(const AdversaryConfig& config);

// 1 - P_free for every action of node i: how likely the link is blocked.
Eigen::VectorXd rpu_action_values(const LinkContext& ctx, int i, std::span<const Action> actions);

// Sink-hole report: the true sub-path estimate scaled up.
double distort_report(double true_estimate, const AdversaryConfig& config);

// Utility-minimizing logit play. Exponents are the reciprocal values; with RPU
// enabled, rpu_weight times the busy probabilities (normalized to the largest)
// is added on the scale of the largest reciprocal, so busier links win near-ties.
Eigen::VectorXd malicious_response(const Eigen::VectorXd& values, const Eigen::VectorXd& busy,
                                   const AdversaryConfig& config);

}  // namespace crn
