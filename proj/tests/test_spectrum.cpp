#include <doctest.h>

#include <array>
#include <cmath>

#include "crn/spectrum.hpp"

using namespace crn;

namespace {

const ChannelParams kRates{5.0, 1.0 / 0.42};

// Scalar closed form of the two-state chain, written out entry by entry.
double p_entry(const ChannelParams& c, int from, int to, double t) {
  const double s = c.lambda + c.mu;
  const double e = std::exp(-s * t);
  const double to_idle = from == 0 ? (c.mu + c.lambda * e) / s : (c.mu - c.mu * e) / s;
  return to == 0 ? to_idle : 1.0 - to_idle;
}

}  // namespace

TEST_CASE("transition matrix at zero time is the identity") {
  const Eigen::Matrix2d p = transition_matrix(kRates, 0.0);
  CHECK(p.isApprox(Eigen::Matrix2d::Identity(), 1e-15));
}

TEST_CASE("transition matrix approaches the stationary law") {
  const Eigen::Matrix2d p = transition_matrix(kRates, 50.0);
  for (int r = 0; r < 2; ++r) {
    CHECK(p(r, 0) == doctest::Approx(0.32258).epsilon(1e-5));
    CHECK(p(r, 1) == doctest::Approx(0.67742).epsilon(1e-5));
  }
  CHECK(stationary_distribution(kRates)(0) == doctest::Approx(10.0 / 31.0).epsilon(1e-15));
}

TEST_CASE("transition matrix matches the scalar closed form") {
  CHECK(transition_matrix(kRates, 0.5)(0, 0) == doctest::Approx(0.33949).epsilon(1e-5));
  for (double t : {0.01, 0.25, 0.5, 1.0, 3.0})
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(transition_matrix(kRates, t)(a, b) == doctest::Approx(p_entry(kRates, a, b, t)));
}

TEST_CASE("transition matrices are stochastic and compose") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const ChannelParams c{0.05 + 20 * rng.uniform(), 0.05 + 20 * rng.uniform()};
    const double s = 3 * rng.uniform(), t = 3 * rng.uniform();
    const Eigen::Matrix2d ps = transition_matrix(c, s);
    CHECK((ps.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(ps.minCoeff() >= 0.0);
    CHECK(ps.maxCoeff() <= 1.0);
    const Eigen::Matrix2d lhs = transition_matrix(c, s + t);
    CHECK((lhs - ps * transition_matrix(c, t)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("transition matrix in single precision") {
  const Eigen::Matrix2f p = transition_matrix<float>(kRates, 0.5f);
  CHECK(p(0, 0) == doctest::Approx(0.33949).epsilon(1e-4));
}

TEST_CASE("bad rates and negative times are rejected") {
  CHECK_THROWS_AS(transition_matrix(ChannelParams{0.0, 1.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(transition_matrix(ChannelParams{1.0, -2.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(transition_matrix(kRates, -0.1), ParameterError);
  CHECK_THROWS_AS(SpectrumModel(1, 2, 0.0, kRates), ParameterError);
}

TEST_CASE("idle probability") {
  CHECK(idle_probability(kRates, kIdle, 0, 0.0, 0.5) == doctest::Approx(1.0));
  CHECK(idle_probability(kRates, kIdle, 0, 0.5, 0.5) == doctest::Approx(0.082085).epsilon(1e-5));
  CHECK(idle_probability(kRates, kBusy, 0, 0.3, 0.5) == 0.0);
  // Stale Busy observation: the chain may have freed the channel since.
  const double stale = idle_probability(kRates, kBusy, 3, 0.5, 0.5);
  CHECK(stale == doctest::Approx(std::exp(-2.5) * p_entry(kRates, 1, 0, 1.5)));

  for (int obs = 0; obs < 2; ++obs)
    for (Slot lag = 0; lag < 4; ++lag) {
      double prev = 2.0;
      for (double tau = 0.0; tau < 2.0; tau += 0.1) {
        const double p = idle_probability(kRates, static_cast<std::uint8_t>(obs), lag, tau, 0.5);
        CHECK(p <= prev);
        prev = p;
      }
    }
}

TEST_CASE("spectrum model caches lagged matrices") {
  const SpectrumModel m(2, 3, 0.5, kRates);
  const Eigen::Matrix2d& a = m.lagged(1, 2, 4);
  CHECK(a.isApprox(transition_matrix(kRates, 2.0)));
  CHECK(&m.lagged(1, 2, 4) == &a);
  CHECK(m.idle_probability(1, 2, kIdle, 2, 0.5) == doctest::Approx(idle_probability(kRates, kIdle, 2, 0.5, 0.5)));
}

TEST_CASE("advance with zero horizon keeps the state") {
  Rng rng(3);
  ClusterSpectrumState s = initial_cluster_state(0, {kRates, kRates, kRates}, rng);
  const auto before = s.true_state;
  for (int i = 0; i < 100; ++i) advance_true_states(s, {kRates, kRates, kRates}, 0.0, rng);
  CHECK(s.true_state == before);
}

TEST_CASE("idle channel with vanishing leave rate stays idle") {
  Rng rng(4);
  const ChannelParams sticky{1e-12, 1.0};
  ClusterSpectrumState s;
  s.true_state = {kIdle};
  s.observed_state = {kIdle};
  s.last_sensed_slot = {0};
  for (int i = 0; i < 10000; ++i) {
    advance_true_states(s, {sticky}, 0.5, rng);
    REQUIRE(s.true_state[0] == kIdle);
  }
}

TEST_CASE("sampled one-slot transitions match the analytic matrix") {
  Rng rng(11);
  ClusterSpectrumState s = initial_cluster_state(0, {kRates}, rng);
  std::array<std::array<double, 2>, 2> counts{};
  for (int i = 0; i < 100000; ++i) {
    const int from = s.true_state[0];
    advance_true_states(s, {kRates}, 0.5, rng);
    counts[from][s.true_state[0]] += 1.0;
  }
  for (int a = 0; a < 2; ++a) {
    const double total = counts[a][0] + counts[a][1];
    for (int b = 0; b < 2; ++b) CHECK(std::abs(counts[a][b] / total - p_entry(kRates, a, b, 0.5)) < 0.01);
  }
}

TEST_CASE("round-robin sensing") {
  Rng rng(5);
  SUBCASE("two channels, slot 0 refreshes channel 0 only") {
    ClusterSpectrumState s = initial_cluster_state(0, {kRates, kRates}, rng);
    s.true_state = {kBusy, kBusy};
    s.observed_state = {kIdle, kIdle};
    sense_update(s, 0);
    CHECK(s.observed_state[0] == kBusy);
    CHECK(s.observed_state[1] == kIdle);
    CHECK(s.last_sensed_slot[0] == 0);
    CHECK(s.last_sensed_slot[1] == -1);
  }
  SUBCASE("one channel is always fresh") {
    ClusterSpectrumState s = initial_cluster_state(0, {kRates}, rng);
    for (Slot n = 0; n < 500; ++n) {
      sense_update(s, n);
      REQUIRE(s.observed_state == s.true_state);
      advance_true_states(s, {kRates}, 0.5, rng);
    }
  }
  SUBCASE("lags follow the schedule and every channel is refreshed once per round") {
    const int k = 4;
    const std::vector<ChannelParams> params(k, kRates);
    ClusterSpectrumState s = initial_cluster_state(0, params, rng);
    std::vector<int> refreshed(k, 0);
    for (Slot n = 0; n < 400; ++n) {
      const auto before = s.last_sensed_slot;
      sense_update(s, n);
      for (int c = 0; c < k; ++c) {
        REQUIRE(s.last_sensed_slot[c] == expected_last_sensed(k, c, n));
        REQUIRE(s.lag(c, n) == (k + n % k - c) % k);
        if (s.last_sensed_slot[c] != before[c]) ++refreshed[c];
      }
      if ((n + 1) % k == 0) {
        for (int c = 0; c < k; ++c) REQUIRE(refreshed[c] == 1);
        std::fill(refreshed.begin(), refreshed.end(), 0);
      }
      advance_true_states(s, params, 0.5, rng);
    }
  }
}
