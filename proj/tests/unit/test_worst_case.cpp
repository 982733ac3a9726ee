#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sharpsum/hardy.hpp"
#include "sharpsum/sum_bound.hpp"
#include "sharpsum/worst_case.hpp"

using namespace sharpsum;

TEST_CASE("slot system: Bernoulli(1/2), p = 1/2, n = 2") {
  const auto sys = build_slot_system(Distribution::bernoulli(0.5), 0.5, 2);
  CHECK(sys.p_levels() == std::vector<double>{0.5, 0.25, 0.0});
  CHECK(sys.p_prime_levels() == std::vector<double>{0.5, 0.75, 1.0});
  CHECK(sys.u() == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(sys.u_prime() == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(sys.chain_holds());
  CHECK(sys.partition_holds());
  for (double s : {0.01, 0.3, 0.5, 0.99}) {
    CHECK(sys.slot_quantile(1, s, false) == Interval::point(1.0));
    CHECK(sys.slot_quantile(2, s, true) == Interval::point(0.0));
  }
}

TEST_CASE("slot system: Exponential(1), p = 1/2, n = 2") {
  const auto sys = build_slot_system(Distribution::exponential(1.0), 0.5, 2);
  CHECK(sys.u()[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(sys.u()[1] == doctest::Approx(-std::log(0.25)).epsilon(1e-15));
  CHECK(sys.u()[2] == kInf);
  CHECK(sys.u_prime()[1] == doctest::Approx(-std::log(0.75)).epsilon(1e-15));
  CHECK(sys.u_prime()[2] == 0.0);
  CHECK(sys.slot_quantile(2, 0.5, false).lo == doctest::Approx(-std::log(0.125)).epsilon(1e-15));
  CHECK(sys.partition_holds());
}

TEST_CASE("slot system: Dirac") {
  const auto sys = build_slot_system(Distribution::dirac(2.5), 0.3, 4);
  for (double u : sys.u()) CHECK(u == 2.5);
  for (double u : sys.u_prime()) CHECK(u == 2.5);
  CHECK(sys.slot_quantile(3, 0.7, true) == Interval::point(2.5));
}

TEST_CASE("slot system: argument checks") {
  CHECK_THROWS_AS(build_slot_system(Distribution::bernoulli(), 0.0, 2), ArgumentError);
  CHECK_THROWS_AS(build_slot_system(Distribution::bernoulli(), 1.0, 2), ArgumentError);
  CHECK_THROWS_AS(build_slot_system(Distribution::bernoulli(), 0.5, 0), ArgumentError);
  const auto sys = build_slot_system(Distribution::bernoulli(), 0.5, 2);
  CHECK_THROWS_AS(sys.slot_quantile(0, 0.5, false), ArgumentError);
  CHECK_THROWS_AS(sys.slot_quantile(3, 0.5, false), ArgumentError);
}

TEST_CASE("slot quantiles agree with the clipped survival route") {
  const auto mu = Distribution::discrete({{-1.0, 0.2}, {0.5, 0.3}, {2.0, 0.1}, {3.0, 0.4}});
  const auto sys = build_slot_system(mu, 0.35, 7);
  for (int i = 1; i <= 7; ++i) {
    for (bool primed : {false, true}) {
      const MonotoneCurve tq = invert(slot_survival(sys, i, primed));
      for (double s : {0.013, 0.25, 0.5, 0.77, 0.999}) {
        CHECK(eval(tq, s) == sys.slot_quantile(i, s, primed));
      }
    }
  }
}

TEST_CASE("coupling sample structure") {
  const auto sys = build_slot_system(Distribution::exponential(1.0), 0.4, 6);
  for (std::uint64_t r = 0; r < 200; ++r) {
    Rng rng = make_stream(3, "unit", {r});
    const auto c = sample_coupling(sys, rng);
    CHECK(c.in_slots);
    const bool eps = c.slot_choice < 6;
    const auto& src = eps ? c.W : c.W_prime;
    // The X_k are a permutation of the selected slot variables.
    auto a = c.X;
    auto b = src;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    for (int i = 1; i <= 6; ++i) {
      const Interval box = sys.slot(i, false);
      CHECK(c.W[i - 1] >= box.lo);
      CHECK(c.W[i - 1] <= box.hi);
    }
  }
}

TEST_CASE("fast average matches the full sample when eps = 1") {
  const auto sys = build_slot_system(Distribution::exponential(1.0), 0.6, 5);
  int matched = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    Rng a = make_stream(9, "unit", {r});
    Rng b = make_stream(9, "unit", {r});
    const auto full = sample_coupling(sys, a);
    const double y = sample_average(sys, b);
    if (full.slot_choice < 5) {
      CHECK(y == full.Y);
      ++matched;
    }
  }
  CHECK(matched > 30);
}

TEST_CASE("Dirac coupling is constant") {
  const auto sys = build_slot_system(Distribution::dirac(1.25), 0.5, 3);
  Rng rng = make_stream(1, "unit");
  const auto c = sample_coupling(sys, rng);
  for (double x : c.X) CHECK(x == 1.25);
  CHECK(c.Y == 1.25);
  CHECK(marginal_check(sys, 2, 1000, 5).distance == 0.0);
}

TEST_CASE("Bernoulli average is eps") {
  const auto sys = build_slot_system(Distribution::bernoulli(0.5), 0.5, 2);
  int ones = 0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    Rng rng = make_stream(11, "unit", {static_cast<std::uint64_t>(r)});
    const double y = sample_average(sys, rng);
    CHECK((y == 0.0 || y == 1.0));
    ones += y == 1.0;
  }
  const double f = static_cast<double>(ones) / reps;
  CHECK(std::abs(f - 0.5) < 3.0 * std::sqrt(0.25 / reps));
}

TEST_CASE("marginals") {
  const auto b = build_slot_system(Distribution::bernoulli(0.5), 0.5, 2);
  const auto mb = marginal_check(b, 1, 100000, 21);
  CHECK(mb.discrete);
  CHECK(mb.distance < 0.006);
  const auto e = build_slot_system(Distribution::exponential(1.0), 0.3, 5);
  const auto me = marginal_check(e, 3, 100000, 21);
  CHECK_FALSE(me.discrete);
  CHECK(me.distance < 0.0061);
}

TEST_CASE("slot means: exact values") {
  const auto b = slot_means(build_slot_system(Distribution::bernoulli(0.5), 0.5, 2), 1000, 4);
  CHECK(b.exact_W == 1.0);
  CHECK(b.exact_W_prime == 0.0);
  CHECK(b.mc_W == 1.0);
  CHECK(b.mc_W_prime == 0.0);
  const auto e = slot_means(build_slot_system(Distribution::exponential(1.0), 0.5, 2), 1000, 4);
  CHECK(e.exact_W == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-14));
  CHECK(e.exact_W_prime == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-13));
  const auto d = slot_means(build_slot_system(Distribution::dirac(3.0), 0.2, 4), 100, 4);
  CHECK(d.exact_W == 3.0);
  CHECK(d.exact_W_prime == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("slot means: quadrature oracle over the slots") {
  // Average of the slot expectations, each integrated directly from T_mu.
  boost::math::quadrature::tanh_sinh<double> q;
  const auto mu = Distribution::pareto(3.0, 1.5);
  const double p = 0.3;
  const int n = 4;
  const auto sys = build_slot_system(mu, p, n);
  double w = 0.0;
  double wp = 0.0;
  auto inner = [](double s) { return std::clamp(s, 0x1p-60, 1.0 - 0x1p-53); };
  for (int i = 1; i <= n; ++i) {
    w += q.integrate([&](double s) { return sys.slot_quantile(i, inner(s), false).lo; }, 0.0, 1.0);
    wp += q.integrate([&](double s) { return sys.slot_quantile(i, inner(s), true).lo; }, 0.0, 1.0);
  }
  const auto m = slot_means(sys, 1000, 2);
  CHECK(m.exact_W == doctest::Approx(w / n).epsilon(1e-9));
  CHECK(m.exact_W_prime == doctest::Approx(wp / n).epsilon(1e-9));
}

TEST_CASE("slot means: Monte Carlo within 4 standard errors") {
  const auto sys = build_slot_system(Distribution::exponential(1.0), 0.3, 10);
  const auto m = slot_means(sys, 20000, 8);
  CHECK(m.slot_violations == 0);
  CHECK(std::abs(m.mc_W - m.exact_W) <= 4.0 * m.se_W);
  CHECK(std::abs(m.mc_W_prime - m.exact_W_prime) <= 4.0 * m.se_W_prime);
}

TEST_CASE("profile simulation") {
  SimulationConfig cfg;
  cfg.p = 0.5;
  cfg.ns = {200};
  cfg.reps = 4000;
  cfg.thresholds = {0.1, 1.0, 2.5};
  cfg.seed = 17;
  const auto r = simulate_profile(Distribution::exponential(1.0), cfg);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.a == doctest::Approx(1.0 - std::log(2.0)));
  CHECK(r.b == doctest::Approx(1.0 + std::log(2.0)));
  CHECK(r.rows[0].limit_value == 1.0);
  CHECK(r.rows[1].limit_value == 0.5);
  CHECK(r.rows[2].limit_value == 0.0);
  CHECK(r.rows[0].empirical > 0.95);
  CHECK(std::abs(r.rows[1].empirical - 0.5) < 0.05);
  CHECK(r.rows[2].empirical < 0.05);
  CHECK(r.slot_violations == 0);

  cfg.workers = 3;
  CHECK(simulate_profile(Distribution::exponential(1.0), cfg).to_csv() == r.to_csv());

  cfg.thresholds = {r.b};
  CHECK(simulate_profile(Distribution::exponential(1.0), cfg).rows[0].near_jump);
}

TEST_CASE("profile simulation at p = 1") {
  SimulationConfig cfg;
  cfg.p = 1.0;
  cfg.ns = {500};
  cfg.reps = 2000;
  cfg.thresholds = {0.8, 1.2};
  const auto r = simulate_profile(Distribution::exponential(1.0), cfg);
  CHECK(r.a == 1.0);
  CHECK(r.rows[0].empirical > 0.99);
  CHECK(r.rows[1].empirical < 0.01);
  cfg.thresholds = {kInf};
  CHECK_THROWS_AS(simulate_profile(Distribution::exponential(1.0), cfg), ArgumentError);
}

TEST_CASE("slot averages concentrate as n grows") {
  for (const auto& mu : {Distribution::exponential(1.0), Distribution::uniform(0.0, 3.0)}) {
    double prev = kInf;
    for (int n : {10, 100, 1000, 10000}) {
      const auto m = slot_means(build_slot_system(mu, 0.4, n), 2000, 13);
      CHECK(m.var_W < prev);
      CHECK(m.var_W_prime < prev);
      prev = std::max(m.var_W, m.var_W_prime);
    }
  }
}

TEST_CASE("simulated survival stays under the identically distributed bound") {
  for (const auto& mu : {Distribution::exponential(1.0), Distribution::bernoulli(0.5),
                         Distribution::pareto(3.0, 1.0)}) {
    const auto bound = iid_bound(mu);
    SimulationConfig cfg;
    cfg.p = 0.3;
    cfg.ns = {5, 50, 500};
    cfg.reps = 5000;
    cfg.seed = 31;
    for (int k = 0; k < 12; ++k) cfg.thresholds.push_back(-0.5 + 0.25 * k);
    const auto r = simulate_profile(mu, cfg);
    for (const auto& row : r.rows) {
      CHECK(row.empirical <= eval(bound.bound, row.t).hi + 3.0 * std::sqrt(0.25 / cfg.reps));
    }
  }
}
