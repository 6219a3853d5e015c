#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "crn/adversary.hpp"
#include "fixtures.hpp"

using namespace crn;

TEST_CASE("sink-hole distortion scales reports") {
  AdversaryConfig c;
  CHECK(distort_report(10.0, c) == 10.0);
  c.sh_scale = 4.0;
  CHECK(distort_report(10.0, c) == 40.0);
  for (double s : {1.0, 2.0, 4.0, 8.0}) {
    c.sh_scale = s;
    CHECK(distort_report(3.7, c) / 3.7 == doctest::Approx(s));
  }
  c.sh_scale = 0.5;
  CHECK_THROWS(validate(c));
}

TEST_CASE("busy-link preference") {
  oracle::World w;
  w.nodes = {{0, 0, 0}, {20, 0, 0}, {20, 10, 1}};
  w.clusters = {{{0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {0, 0}}};
  const std::vector<Role> roles{Role::malicious_relay, Role::relay, Role::sink};
  const std::vector<Action> same_cluster{{1, 0}, {1, 1}, {1, 2}};

  auto fresh = fixtures::mirror(w, roles, {});
  const Eigen::VectorXd uniform = rpu_action_values(fresh.context(), 0, same_cluster);
  CHECK((uniform.array() - uniform(0)).abs().maxCoeff() < 1e-15);

  w.clusters[0][1] = {1, 0};
  auto busy = fixtures::mirror(w, roles, {});
  const Eigen::VectorXd v = rpu_action_values(busy.context(), 0, same_cluster);
  CHECK(v(1) == 1.0);
  Eigen::Index top;
  v.maxCoeff(&top);
  CHECK(top == 1);

  // Mixed staleness across both clusters: ranking follows 1 - P_free.
  Rng rng(13);
  std::vector<Action> all;
  for (int j : {1, 2})
    for (int k = 0; k < 3; ++k) all.push_back({j, k});
  for (int trial = 0; trial < 20; ++trial) {
    fixtures::randomize_channels(w, rng, 6);
    auto m = fixtures::mirror(w, roles, {});
    const Eigen::VectorXd b = rpu_action_values(m.context(), 0, all);
    for (std::size_t a = 0; a < all.size(); ++a)
      CHECK(b(a) == doctest::Approx(1.0 - w.p_free(0, all[a].relay, all[a].channel)).epsilon(1e-14));
  }
}

TEST_CASE("malicious response") {
  AdversaryConfig c;
  c.rpu = false;
  c.temperature = 1.0;
  const Eigen::VectorXd p = malicious_response(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d::Zero(), c);
  CHECK(p(0) == doctest::Approx(0.62246).epsilon(1e-5));

  // Equal values: the RPU term alone picks the busier link.
  c.rpu = true;
  const Eigen::VectorXd q = malicious_response(Eigen::Vector3d(5, 5, 5), Eigen::Vector3d(0.2, 0.9, 0.5), c);
  Eigen::Index top;
  q.maxCoeff(&top);
  CHECK(top == 1);
  CHECK(std::abs(q.sum() - 1.0) < 1e-12);
  // A clearly worse path still dominates a small busy-probability edge.
  const Eigen::VectorXd r = malicious_response(Eigen::Vector2d(0.5, 5.0), Eigen::Vector2d(0.1, 1.0), c);
  CHECK(r(0) > r(1));
}
