#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sharpsum/hardy.hpp"
#include "sharpsum/sum_bound.hpp"

using namespace sharpsum;

TEST_CASE("sum bound for two exponentials") {
  const auto e = Distribution::exponential(1.0);
  const auto r = theorem1_bound({e, e});
  CHECK(eval(r.bound, 4.0).lo == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(eval(r.bound, 6.0).lo == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(eval(r.bound, 1.0) == Interval{1.0, 1.0});
  CHECK(eval(r.bound, 2.0).hi == 1.0);
  // Sum of the two H(T) at p = 0.5.
  const std::vector<MonotoneCurve> hs{hardy_of(e).curve, hardy_of(e).curve};
  CHECK(eval(pointwise_sum(hs), 0.5).lo == doctest::Approx(3.386294361119891).epsilon(1e-14));
}

TEST_CASE("sum bound special cases") {
  const auto d = Distribution::dirac(1.5);
  CHECK(theorem1_bound({d, d, d}).bound == make_incr(4.5));
  const auto b = Distribution::bernoulli(0.5);
  const auto single = theorem1_bound({b});
  CHECK(curve_leq(survival_curve(b), single.bound));
  const double p = 0.7;
  const double h = eval(hardy_of(b).curve, p).lo;
  const Interval at = eval(single.bound, h);
  CHECK(at.lo <= p);
  CHECK(p <= at.hi);
}

TEST_CASE("iid bound closed forms") {
  const auto e = iid_bound(Distribution::exponential(1.0)).bound;
  CHECK(eval(e, 0.5) == Interval{1.0, 1.0});
  for (double t : {1.5, 2.0, 4.0, 10.0}) {
    CHECK(eval(e, t).lo == doctest::Approx(std::exp(1.0 - t)).epsilon(1e-12));
  }
  const auto pa = iid_bound(Distribution::pareto(2.0, 1.0)).bound;
  for (double t : {2.0, 3.0, 10.0}) {
    CHECK(eval(pa, t).lo == doctest::Approx(std::pow(t / 2.0, -2.0)).epsilon(1e-12));
  }
  const auto be = iid_bound(Distribution::bernoulli(0.5)).bound;
  CHECK(eval(be, 2.0 / 3.0).lo == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(eval(be, 0.5).hi == 1.0);
}

TEST_CASE("naive union bound") {
  const auto e = Distribution::exponential(1.0);
  CHECK(naive_union_bound(e, 1).bound == survival_curve(e));
  CHECK(eval(naive_union_bound(e, 3).bound, 5.0).lo ==
        doctest::Approx(0.0202138409972564013).epsilon(1e-14));
  CHECK(naive_union_bound(Distribution::dirac(2.0), 7).bound == make_incr(2.0));
}

TEST_CASE("bound sandwich") {
  for (const auto& mu : {Distribution::exponential(1.0), Distribution::bernoulli(0.3),
                         Distribution::pareto(3.0, 1.0), Distribution::uniform(-1.0, 2.0)}) {
    const auto beta = iid_bound(mu).bound;
    CHECK(curve_leq(survival_curve(mu), beta, 1e-12));
    CHECK(curve_leq(make_incr(expectation(mu)), beta, 1e-12));
  }
}

TEST_CASE("corollary power profile") {
  const auto r = corollary_power_bound(make_id_pow(2.0), 2.0);
  CHECK(r.constant == 4.0);
  CHECK(eval(r.bound, 4.0).lo == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(eval(r.bound, 1.0).lo == 1.0);
  CHECK(r.certificates.size() == 2);
  CHECK(r.certificates[0].passed);
  CHECK(power_factor(3.0) == doctest::Approx(3.375).epsilon(1e-15));
  CHECK(std::abs(power_factor(1000.0) / std::numbers::e - 1.0) < 0.002);
  CHECK_NOTHROW(corollary_power_bound(make_exp(), 10.0));
}

TEST_CASE("corollary exponential profile") {
  const auto r = corollary_exp_bound(make_exp());
  CHECK(eval(r.bound, 1.0).lo == doctest::Approx(1.0).epsilon(1e-15));
  const auto c = corollary_exp_bound(scale(make_exp(), 0.1, Axis::y));
  CHECK(eval(c.bound, 2.0).lo == doctest::Approx(0.1 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("corollary certification failures carry a witness") {
  // alpha^(-1/2) = t^(1/2) is concave.
  try {
    corollary_power_bound(make_id_pow(1.0), 2.0);
    FAIL("expected ConvexityError");
  } catch (const ConvexityError& e) {
    CHECK(e.witness()[0] < e.witness()[1]);
    CHECK(e.witness()[1] < e.witness()[2]);
    CHECK_FALSE(e.certificate().passed);
  }
  CHECK_THROWS_AS(corollary_exp_bound(make_id_pow(1.0)), PreconditionError);
  // A profile reaching 0 is not admissible.
  CHECK_THROWS_AS(corollary_exp_bound(survival_curve(Distribution::uniform(0.0, 1.0))),
                  PreconditionError);
}

TEST_CASE("corollary consistency with the Hardy bound") {
  const auto mu = Distribution::pareto(2.0, 1.0);
  const auto alpha = survival_curve(mu);
  const auto cor = corollary_power_bound(alpha, 2.0);
  CHECK(curve_leq(iid_bound(mu).bound, cor.bound, 1e-12));
  const auto ex = Distribution::exponential(1.0);
  CHECK(curve_leq(iid_bound(ex).bound, corollary_exp_bound(survival_curve(ex)).bound, 1e-12));
}

TEST_CASE("moment bounds") {
  const auto d = moment_bound_check(Distribution::dirac(2.0), 3.0);
  CHECK(d.lhs == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(d.jensen_rhs == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(d.rhs > d.lhs);
  const auto p = moment_bound_check(Distribution::pareto(2.0, 1.0), 1.5);
  CHECK(p.lhs == doctest::Approx(11.313708498984761).epsilon(1e-9));
  CHECK(p.rhs == doctest::Approx(20.784609690826528).epsilon(1e-12));
  CHECK(p.holds);
  const auto b = moment_bound_check(Distribution::bernoulli(0.5), 2.0);
  CHECK(b.lhs == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(b.rhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(moment_bound_check(Distribution::pareto(2.0, 1.0), 2.0), CapabilityError);
}

TEST_CASE("power geometric mean") {
  CHECK(power_geometric_mean(5.0, 5.0, 0.3, 7.0) == doctest::Approx(5.0).epsilon(1e-14));
  // Reference from 30-digit arithmetic; the limit is e.
  CHECK(power_geometric_mean(1.0, std::exp(2.0), 0.5, 100.0) ==
        doctest::Approx(2.70472456666714636).epsilon(1e-13));
  Rng rng = make_stream(7, "pgm");
  for (int i = 0; i < 50; ++i) {
    const double a = 0.1 + 9.9 * uniform01(rng);
    const double b = 0.1 + 9.9 * uniform01(rng);
    const double l = uniform01(rng);
    const double g = std::pow(a, l) * std::pow(b, 1.0 - l);
    double prev = kInf;
    for (double q : {1.0, 10.0, 100.0, 1e4}) {
      const double err = std::abs(power_geometric_mean(a, b, l, q) - g);
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
    CHECK(prev <= 1e-3);
  }
}

TEST_CASE("convexity equivalence") {
  const auto grid = geometric_grid(0.25, 4.0, 512);
  const std::vector<double> qs{0.5, 1.0, 2.0, 5.0};
  auto id = convexity_equivalence_check([](double x) { return x; }, qs, grid);
  CHECK(id.exponential.convex);
  CHECK(id.forward_holds);
  CHECK(id.converse_holds);
  for (const auto& v : id.power) CHECK(v.convex);

  auto neg = convexity_equivalence_check([](double x) { return -x; }, qs, grid);
  CHECK(neg.exponential.concave);
  CHECK(neg.nonincreasing);
  CHECK(neg.converse_holds);

  auto nlog = convexity_equivalence_check([](double x) { return -std::log(x); }, qs, grid);
  CHECK(nlog.exponential.convex);
  CHECK(nlog.exponential.concave);
  for (const auto& v : nlog.power) CHECK(v.concave);
  CHECK(nlog.forward_holds);
  CHECK(nlog.converse_holds);

  CHECK_THROWS_AS(
      convexity_equivalence_check([](double x) { return (x - 1.0) * (x - 1.0); }, qs, grid),
      PreconditionError);
}
