#include "crn/adversary.hpp"

#include <algorithm>
#include <stdexcept>

#include "crn/learning.hpp"

namespace crn {

void validate(const AdversaryConfig& config) {
  if (!(config.sh_scale >= 1.0)) throw std::invalid_argument("sh_scale must be at least 1");
  if (!(config.temperature >= 0.0)) throw std::invalid_argument("adversary temperature must be non-negative");
  if (!(config.rpu_weight >= 0.0)) throw std::invalid_argument("rpu_weight must be non-negative");
  if (config.per_source < 0) throw std::invalid_argument("per_source must be non-negative");
}

Eigen::VectorXd rpu_action_values(const LinkContext& ctx, int i, std::span<const Action> actions) {
  Eigen::VectorXd busy(static_cast<Eigen::Index>(actions.size()));
  for (std::size_t a = 0; a < actions.size(); ++a)
    busy(a) = 1.0 - link_availability(ctx, i, actions[a].relay, actions[a].channel);
  return busy;
}

double distort_report(double true_estimate, const AdversaryConfig& config) {
  return config.sh_scale * true_estimate;
}

Eigen::VectorXd malicious_response(const Eigen::VectorXd& values, const Eigen::VectorXd& busy,
                                   const AdversaryConfig& config) {
  Eigen::VectorXd inverse = values.unaryExpr([](double v) { return 1.0 / std::max(v, kInverseFloor); });
  if (config.rpu && busy.size() == values.size() && busy.size() > 0) {
    const double top = busy.maxCoeff();
    if (top > 0.0) inverse += (config.rpu_weight * inverse.maxCoeff() / top) * busy;
  }
  // The reciprocal is already applied, so the normal branch gives exp(T / u).
  return logit_response(inverse, config.temperature, PlayerRole::normal);
}

}  // namespace crn
