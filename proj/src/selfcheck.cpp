#include "sharpsum/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "sharpsum/coupling_oracle.hpp"
#include "sharpsum/hardy.hpp"
#include "sharpsum/sum_bound.hpp"
#include "sharpsum/worst_case.hpp"

namespace sharpsum {

namespace {

Distribution random_discrete(Rng& rng, int max_atoms) {
  const int m = 1 + static_cast<int>(uniform01(rng) * max_atoms);
  std::vector<Atom> atoms;
  double x = std::floor(uniform01(rng) * 16.0) / 4.0;
  for (int i = 0; i < m; ++i) {
    atoms.push_back({x, 0.05 + uniform01(rng)});
    x += 0.25 + std::floor(uniform01(rng) * 8.0) / 4.0;
  }
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  for (auto& a : atoms) a.mass /= total;
  return Distribution::discrete(atoms);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CheckResult check(const std::string& name, const std::function<std::string(bool&)>& body) {
  CheckResult r{name, true, ""};
  try {
    r.detail = body(r.passed);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("threw: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(unsigned workers) {
  std::vector<CheckResult> out;

  out.push_back(check("hardy closed forms", [](bool& ok) {
    Rng rng = make_stream(1, "selfcheck-hardy");
    const auto hp = hardy_of(Distribution::pareto(2.0, 1.0));
    const auto he = hardy_of(Distribution::exponential(1.0));
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double p = uniform01(rng);
      worst = std::max(worst, std::abs(eval(hp.curve, p).lo / (2.0 / std::sqrt(p)) - 1.0));
      worst = std::max(worst, std::abs(eval(he.curve, p).lo / (1.0 - std::log(p)) - 1.0));
    }
    ok = worst <= 1e-10;
    return "max rel err " + num(worst);
  }));

  out.push_back(check("quantile is the inverse of survival", [](bool& ok) {
    for (const auto& mu : {Distribution::bernoulli(0.3), Distribution::exponential(2.0),
                           Distribution::pareto(3.0, 1.0), Distribution::uniform(-1.0, 2.0)}) {
      ok = ok && invert(mu.survival()) == mu.tail_quantile();
    }
    return std::string();
  }));

  out.push_back(check("f <= H(f) and expectation sandwich", [](bool& ok) {
    Rng rng = make_stream(2, "selfcheck-sandwich");
    int bad = 0;
    for (int i = 0; i < 30; ++i) {
      const auto mu = random_discrete(rng, 8);
      const auto h = hardy_of(mu);
      if (!curve_leq(mu.tail_quantile(), h.curve, 1e-9)) ++bad;
      const double p = 0.02 + 0.96 * uniform01(rng);
      const double hv = hardy_value(mu, p);
      const double d = delta(mu, p);
      const double e = expectation(mu);
      if (d < 0.0 || hv - d > e + 1e-10 || e > hv + 1e-10) ++bad;
    }
    ok = bad == 0;
    return std::to_string(bad) + " violations";
  }));

  out.push_back(check("slot systems and quantile identity", [](bool& ok) {
    Rng rng = make_stream(3, "selfcheck-slots");
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      const auto mu = random_discrete(rng, 6);
      const auto sys = build_slot_system(mu, 0.05 + 0.9 * uniform01(rng),
                                         1 + static_cast<int>(uniform01(rng) * 6));
      if (!sys.chain_holds() || !sys.partition_holds()) ++bad;
      for (int k = 1; k <= sys.n(); ++k) {
        for (bool primed : {false, true}) {
          const auto tq = invert(slot_survival(sys, k, primed));
          const double s = uniform01(rng);
          if (!(eval(tq, s) == sys.slot_quantile(k, s, primed))) ++bad;
        }
      }
    }
    ok = bad == 0;
    return std::to_string(bad) + " mismatches";
  }));

  out.push_back(check("slot means", [workers](bool& ok) {
    const auto sys = build_slot_system(Distribution::exponential(1.0), 0.5, 10);
    const auto m = slot_means(sys, 20000, 5, workers);
    const double zw = std::abs(m.mc_W - m.exact_W) / m.se_W;
    const double zp = std::abs(m.mc_W_prime - m.exact_W_prime) / m.se_W_prime;
    ok = zw <= 4.0 && zp <= 4.0 && m.slot_violations == 0;
    return "z = " + num(zw) + ", " + num(zp);
  }));

  out.push_back(check("marginals of the coupling", [workers](bool& ok) {
    const auto sys = build_slot_system(Distribution::exponential(1.0), 0.3, 5);
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) worst = std::max(worst, marginal_check(sys, k, 20000, 6, workers).distance);
    // 99.9% Kolmogorov-Smirnov band at 2e4 samples.
    ok = worst < 1.95 / std::sqrt(20000.0);
    return "max KS " + num(worst);
  }));

  out.push_back(check("transport oracle under the bound", [workers](bool& ok) {
    Rng rng = make_stream(4, "selfcheck-oracle");
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      const auto a = random_discrete(rng, 4);
      const auto b = random_discrete(rng, 4);
      const auto bound = theorem1_bound({a, b});
      for (const auto& x : a.atoms()) {
        for (const auto& y : b.atoms()) {
          const double t = x.value + y.value;
          const double v = max_tail_two({a, b, t}, workers).value_double;
          worst = std::min(worst, eval(bound.bound, t).hi - v);
        }
      }
    }
    ok = worst >= -1e-9;
    return "min slack " + num(worst);
  }));

  out.push_back(check("moment bounds", [](bool& ok) {
    Rng rng = make_stream(5, "selfcheck-moments");
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      const auto mu = random_discrete(rng, 8);
      for (double q : {1.5, 2.0, 4.0}) {
        const auto m = moment_bound_check(mu, q);
        if (m.lhs > m.rhs * (1 + 1e-8) || m.lhs < m.jensen_rhs * (1 - 1e-8)) ++bad;
      }
    }
    ok = bad == 0;
    return std::to_string(bad) + " violations";
  }));

  out.push_back(check("power factor and power mean", [](bool& ok) {
    const double f = power_factor(1000.0);
    const double m = power_geometric_mean(2.0, 5.0, 0.3, 1e4);
    const double g = std::pow(2.0, 0.3) * std::pow(5.0, 0.7);
    ok = power_factor(2.0) == 4.0 && std::abs(f / std::exp(1.0) - 1.0) < 2e-3 &&
         std::abs(m - g) < 1e-3;
    return "q=1000 factor " + num(f);
  }));

  out.push_back(check("power versus exponential convexity", [](bool& ok) {
    const auto grid = geometric_grid(1e-3, 1e3, 512);
    const std::vector<double> qs{0.5, 1.0, 2.0, 4.0};
    const std::vector<std::function<double(double)>> fs{
        [](double x) { return x; }, [](double x) { return -x; }, [](double x) { return x * x; },
        [](double x) { return std::log(x); }};
    for (const auto& f : fs) {
      const auto r = convexity_equivalence_check(f, qs, grid);
      ok = ok && r.forward_holds && r.converse_holds;
    }
    return std::string();
  }));

  out.push_back(check("deterministic simulation", [workers](bool& ok) {
    SimulationConfig cfg;
    cfg.ns = {50};
    cfg.reps = 2000;
    cfg.thresholds = {0.2, 1.0, 2.0};
    cfg.seed = 9;
    cfg.workers = 1;
    const auto a = simulate_profile(Distribution::exponential(1.0), cfg).to_csv();
    cfg.workers = std::max(2u, workers);
    const auto b = simulate_profile(Distribution::exponential(1.0), cfg).to_csv();
    ok = a == b;
    return std::string();
  }));

  return out;
}

}  // namespace sharpsum
