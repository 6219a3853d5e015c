#include <doctest.h>

#include <cmath>

#include "crn/learning.hpp"
#include "crn/rng.hpp"
#include "crn/stage_game.hpp"
#include "oracle.hpp"

using namespace crn;

TEST_CASE("rate schedules") {
  const RateSchedule one = make_rate_schedules(1);
  CHECK(one.gamma_exponents == std::vector<double>{0.85});
  const RateSchedule two = make_rate_schedules(2);
  REQUIRE(two.gamma_exponents.size() == 2);
  CHECK(two.gamma_exponents[0] == doctest::Approx(0.85));
  CHECK(two.gamma_exponents[1] == doctest::Approx(0.62));
  const std::int64_t n = 1000000;
  CHECK(two.gamma(1, n) / two.gamma(2, n) == doctest::Approx(std::pow(1e6, -0.23)));
  CHECK(two.alpha(n) == doctest::Approx(std::pow(1e6, -0.55)));
  CHECK(two.beta(n) == doctest::Approx(std::pow(1e6, -0.95)));

  const RateSchedule many = make_rate_schedules(12);
  for (std::size_t r = 1; r < many.gamma_exponents.size(); ++r)
    CHECK(many.gamma_exponents[r] < many.gamma_exponents[r - 1]);
  // Timescale ratios are below one and shrink as n grows.
  auto shrinking = [](auto ratio) { return ratio(1000) < 1.0 && ratio(1000000) < ratio(1000); };
  for (int r = 1; r <= 12; ++r) {
    CHECK(shrinking([&](std::int64_t m) { return many.beta(m) / many.gamma(r, m); }));
    CHECK(shrinking([&](std::int64_t m) { return many.gamma(r, m) / many.alpha(m); }));
    if (r > 1) CHECK(shrinking([&](std::int64_t m) { return many.gamma(r - 1, m) / many.gamma(r, m); }));
  }
  CHECK(shrinking([&](std::int64_t m) { return many.beta(m) / many.alpha(m); }));
  for (double e : many.gamma_exponents) {
    CHECK(e > 0.5);
    CHECK(e <= 1.0);
  }

  CHECK_THROWS_AS(make_rate_schedules(0), ScheduleError);
  CHECK_THROWS_AS(make_rate_schedules(100), ScheduleError);
  ScheduleBand bad;
  bad.alpha_exponent = 0.4;
  CHECK_THROWS_AS(make_rate_schedules(2, bad), ScheduleError);
}

TEST_CASE("logit response") {
  const Eigen::Vector2d v(1.0, 2.0);
  const Eigen::VectorXd normal = logit_response(v, 1.0);
  CHECK(normal(0) == doctest::Approx(0.26894).epsilon(1e-5));
  CHECK(normal(1) == doctest::Approx(0.73106).epsilon(1e-5));
  const Eigen::VectorXd bad = logit_response(v, 1.0, PlayerRole::malicious);
  CHECK(bad(0) == doctest::Approx(0.62246).epsilon(1e-5));
  CHECK(bad(1) == doctest::Approx(0.37754).epsilon(1e-5));

  const Eigen::VectorXd flat = logit_response(Eigen::Vector3d(4, 4, 4), 2.0, PlayerRole::malicious);
  CHECK((flat.array() - 1.0 / 3).abs().maxCoeff() < 1e-15);

  // Zero values are clamped rather than inverted.
  const Eigen::VectorXd clamped = logit_response(Eigen::Vector2d(0.0, 1.0), 1e-7, PlayerRole::malicious);
  CHECK(clamped.allFinite());
  CHECK(clamped(0) > clamped(1));

  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(5);
    std::vector<double> xs(5);
    for (int a = 0; a < 5; ++a) xs[a] = x(a) = 0.1 + 10 * rng.uniform();
    const double temp = 3 * rng.uniform();
    const Eigen::VectorXd p = logit_response(x, temp);
    const auto ref = oracle::softmax(xs, temp);
    for (int a = 0; a < 5; ++a) CHECK(p(a) == doctest::Approx(ref[a]).epsilon(1e-12));
    CHECK(((logit_response(Eigen::VectorXd(x.array() + 7.5), temp) - p).cwiseAbs().maxCoeff()) < 1e-12);
    Eigen::Index hi, lo, phi, plo;
    x.maxCoeff(&hi);
    x.minCoeff(&lo);
    logit_response(x, 1.0).maxCoeff(&phi);
    logit_response(x, 1.0, PlayerRole::malicious).maxCoeff(&plo);
    CHECK(phi == hi);
    CHECK(plo == lo);
  }
}

TEST_CASE("action value recursion") {
  StateTable t(3);
  update_action_value(t, 1, 7.0, 1.0);
  CHECK(t.action_value(1) == 7.0);
  CHECK(t.action_value(0) == 0.0);
  CHECK(t.action_value(2) == 0.0);

  // Noisy samples around 10 with alpha(n) = n^-0.55.
  Rng rng(31);
  StateTable s(1);
  for (std::int64_t n = 1; n <= 10000; ++n) update_action_value(s, 0, 10.0 + 4.0 * (rng.uniform() - 0.5), RateSchedule::step(n, 0.55));
  CHECK(std::abs(s.action_value(0) - 10.0) < 0.5);
}

TEST_CASE("path estimate recursion") {
  StateTable t(2);
  t.strategy << 0.25, 0.75;
  t.action_value << 4.0, 8.0;
  const std::vector<std::optional<double>> reports{2.0, 0.0};
  update_path_estimate(t, reports, 1.0);
  CHECK(t.path_estimate == doctest::Approx(0.25 * 6.0 + 0.75 * 8.0));

  // Sink next hop: reports are zero and the estimate is the expected local value.
  StateTable sink_side(2);
  sink_side.action_value << 3.0, 5.0;
  const std::vector<std::optional<double>> zeros{0.0, 0.0};
  update_path_estimate(sink_side, zeros, 1.0);
  CHECK(sink_side.path_estimate == doctest::Approx(4.0));

  StateTable fixed(2);
  fixed.strategy << 0.4, 0.6;
  fixed.action_value << 1.0, 2.0;
  const std::vector<std::optional<double>> r{10.0, 20.0};
  const double target = 0.4 * 11.0 + 0.6 * 22.0;
  for (std::int64_t n = 1; n <= 10000; ++n) update_path_estimate(fixed, r, RateSchedule::step(n, 0.62));
  CHECK(std::abs(fixed.path_estimate - target) < 1e-6);

  // A missing report reuses the last one and is counted.
  const std::vector<std::optional<double>> partial{std::nullopt, 20.0};
  update_path_estimate(fixed, partial, 1.0);
  CHECK(fixed.stale_reports == 1);
  CHECK(fixed.path_estimate == doctest::Approx(target));
}

TEST_CASE("strategy recursion") {
  StateTable t(3);
  const Eigen::Vector3d br(0.2, 0.5, 0.3);
  update_strategy(t, br, 1.0);
  CHECK((t.strategy - br).cwiseAbs().maxCoeff() < 1e-15);
  update_strategy(t, br, 0.3);
  CHECK((t.strategy - br).cwiseAbs().maxCoeff() < 1e-15);

  StateTable s(3);
  const Eigen::Vector3d target(0.7, 0.1, 0.2);
  for (std::int64_t n = 1; n <= 10000; ++n) update_strategy(s, target, RateSchedule::step(n, 0.95));
  CHECK((s.strategy - target).cwiseAbs().maxCoeff() < 0.01);

  Rng rng(8);
  StateTable w(4);
  for (int n = 1; n <= 5000; ++n) {
    Eigen::Vector4d b;
    for (int a = 0; a < 4; ++a) b(a) = rng.uniform();
    b /= b.sum();
    update_strategy(w, b, rng.uniform());
    REQUIRE(w.strategy.minCoeff() >= 0.0);
    REQUIRE(std::abs(w.strategy.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("exploration rate") {
  CHECK(exploration_rate(1) == 1.0);
  CHECK(exploration_rate(1000) == doctest::Approx(std::pow(1000.0, -0.3)));
  CHECK(exploration_rate(100000000) == 0.01);
}

TEST_CASE("learner tables start uniform") {
  LearnerState l(4, 0.5);
  CHECK(l.find(9) == nullptr);
  StateTable& t = l.table(9);
  CHECK((t.strategy.array() == 0.25).all());
  CHECK((t.action_value.array() == 0.0).all());
  CHECK(l.find(9) == &t);
  CHECK_THROWS(LearnerState(0, 0.5));
}

namespace {

// Two independent single-action-choice players whose payoffs ignore each other.
StageGame separable() {
  StageGame g;
  g.num_actions = {2, 3};
  g.roles = {PlayerRole::normal, PlayerRole::normal};
  g.successor = {{-1, -1}, {-1, -1, -1}};
  g.local.resize(6, 2);
  const double u0[2] = {1.0, 4.0}, u1[3] = {2.0, 0.5, 3.0};
  for (std::size_t row = 0; row < 6; ++row) {
    const auto a = g.decode(row);
    g.local(row, 0) = u0[a[0]];
    g.local(row, 1) = u1[a[1]];
  }
  g.accumulate_paths();
  return g;
}

}  // namespace

TEST_CASE("stage game encoding and path accumulation") {
  StageGame g;
  g.num_actions = {2, 2};
  g.roles = {PlayerRole::normal, PlayerRole::normal};
  g.successor = {{1, -1}, {-1, -1}};  // player 0's first action forwards to player 1
  g.local.resize(4, 2);
  g.local << 1, 10, 2, 20, 3, 30, 4, 40;
  g.accumulate_paths();
  for (std::size_t row = 0; row < 4; ++row) CHECK(g.encode(g.decode(row)) == row);
  CHECK(g.path(0, 0) == 11.0);  // a = (0, 0)
  CHECK(g.path(1, 0) == 2.0);   // a = (1, 0)
  CHECK(g.path(2, 0) == 3.0 + 30.0);
  CHECK(g.path(3, 1) == 40.0);
}

TEST_CASE("second differences: separable games, scaling") {
  StageGame g = separable();
  const MixedProfile profile{Eigen::Vector2d(0.5, 0.5), Eigen::Vector3d(0.2, 0.3, 0.5)};
  // The multilinear extension still couples the weights, so compare against
  // the exact cross derivative: the payoff of a_i against a_j.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) {
      const double d = supermodularity_check(g, profile, 0, a, 1, b).value;
      std::vector<int> ab{a, b};
      CHECK(d == doctest::Approx(g.path(g.encode(ab), 0)).epsilon(1e-6));
    }
  // Centred on the simplex (weights summing to zero change), separability gives 0.
  MixedProfile centred = profile;
  const double base = expected_payoff(g, g.path, centred, 0);
  centred[1] += Eigen::Vector3d(0.1, -0.05, -0.05);
  CHECK(expected_payoff(g, g.path, centred, 0) == doctest::Approx(base));

  StageGame scaled = g;
  scaled.local *= 3.0;
  scaled.accumulate_paths();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(supermodularity_check(scaled, profile, 0, a, 1, b).value ==
            doctest::Approx(3.0 * supermodularity_check(g, profile, 0, a, 1, b).value));
  CHECK(supermodularity_check(g, profile, 0, 0, 1, 0, 1e-7).cancellation_warning);
  CHECK_THROWS(supermodularity_check(g, profile, 0, 0, 0, 1));
}

TEST_CASE("regret") {
  StageGame g = separable();
  const MixedProfile uniform{Eigen::Vector2d(0.5, 0.5), Eigen::Vector3d::Constant(1.0 / 3)};
  const auto r = epsilon_ne_check(g, uniform);
  CHECK(r[0] == doctest::Approx(4.0 - 2.5));
  CHECK(r[1] == doctest::Approx(3.0 - 5.5 / 3));
  const MixedProfile best{Eigen::Vector2d(0, 1), Eigen::Vector3d(0, 0, 1)};
  for (double x : epsilon_ne_check(g, best)) CHECK(x == doctest::Approx(0.0));

  StageGame bad = g;
  bad.roles[0] = PlayerRole::malicious;
  const MixedProfile worst{Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 0, 1)};
  CHECK(epsilon_ne_check(bad, worst)[0] == doctest::Approx(0.0));
  CHECK(epsilon_ne_check(bad, best)[0] == doctest::Approx(3.0));
  CHECK(payoff_range(g, 0) == 3.0);
}

TEST_CASE("SFP on a game with a dominant action") {
  StageGame g = separable();
  SfpOptions opt;
  opt.steps = 20000;
  opt.temperature = 5.0;
  const SfpTrace tr = run_sfp(g, opt);
  const auto r = epsilon_ne_check(g, tr.strategy);
  CHECK(r[0] < 0.05 * payoff_range(g, 0));
  CHECK(r[1] < 0.05 * payoff_range(g, 1));
  CHECK(tr.strategy[0](1) > 0.9);
}
