#include "sharpsum/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sharpsum {

namespace {

MonotoneCurve build_survival(Distribution::Kind kind, const std::vector<Atom>& atoms,
                             const std::vector<double>& levels, const std::vector<Knot>& knots,
                             double a, double b) {
  switch (kind) {
    case Distribution::Kind::discrete: {
      std::vector<Point> vs;
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        vs.push_back({atoms[j].value, levels[j]});
        vs.push_back({atoms[j].value, levels[j + 1]});
      }
      return MonotoneCurve(vs, {}, Tail::horizontal(), Tail::horizontal());
    }
    case Distribution::Kind::piecewise_linear_cdf: {
      std::vector<Point> vs;
      for (const auto& k : knots) vs.push_back({k.t, 1.0 - k.cdf});
      return MonotoneCurve(vs, {}, Tail::horizontal(), Tail::horizontal());
    }
    case Distribution::Kind::exponential: {
      auto shape = transform_shape(std::make_shared<ExpShape>(), 1.0 / a, 0.0, 1.0, 0.0);
      return MonotoneCurve({{0.0, 1.0}}, {}, Tail::horizontal(), Tail::curved(shape, kInf));
    }
    case Distribution::Kind::pareto: {
      auto shape = transform_shape(std::make_shared<PowerShape>(a, false), b, 0.0, 1.0, 0.0);
      return MonotoneCurve({{b, 1.0}}, {}, Tail::horizontal(), Tail::curved(shape, kInf));
    }
    case Distribution::Kind::uniform:
      return MonotoneCurve({{a, 1.0}, {b, 0.0}}, {}, Tail::horizontal(), Tail::horizontal());
  }
  throw ArgumentError("unknown distribution kind");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_nonnegative_support(const Distribution& mu) {
  bool ok = true;
  switch (mu.kind()) {
    case Distribution::Kind::discrete:
      ok = mu.atoms().front().value >= 0.0;
      break;
    case Distribution::Kind::piecewise_linear_cdf:
      ok = mu.knots().front().t >= 0.0;
      break;
    case Distribution::Kind::uniform:
      ok = mu.lower() >= 0.0;
      break;
    default:
      break;
  }
  if (!ok) throw CapabilityError("moments need a law supported on [0, inf)");
}

}  // namespace

Distribution::Distribution(Kind kind, std::vector<Atom> atoms, std::vector<Knot> knots, double a,
                           double b)
    : kind_(kind), atoms_(std::move(atoms)), knots_(std::move(knots)), param_a_(a), param_b_(b) {
  if (kind_ == Kind::discrete) {
    double total = 0.0;
    for (const auto& at : atoms_) total += at.mass;
    levels_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t j = atoms_.size() - 1; j > 0; --j) {
      levels_[j] = levels_[j + 1] + atoms_[j].mass / total;
    }
    levels_[0] = 1.0;
    if (atoms_.size() > 1 && !(levels_[1] < 1.0)) {
      throw ArgumentError("discrete law has atoms of negligible mass");
    }
  }
  survival_ = std::make_shared<const MonotoneCurve>(
      build_survival(kind_, atoms_, levels_, knots_, param_a_, param_b_));
  tail_quantile_ = std::make_shared<const MonotoneCurve>(invert(*survival_));
}

Distribution Distribution::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ArgumentError("discrete law needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i].value)) throw ArgumentError("atom values must be finite");
    if (!(atoms[i].mass > 0.0)) throw ArgumentError("atom masses must be positive");
    if (i > 0 && !(atoms[i - 1].value < atoms[i].value)) {
      throw ArgumentError("atom values must be strictly increasing");
    }
    total += atoms[i].mass;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ArgumentError("atom masses must sum to 1 (got " + fmt(total) + ")");
  }
  return Distribution(Kind::discrete, std::move(atoms), {}, 0.0, 0.0);
}

Distribution Distribution::dirac(double c) { return discrete({{c, 1.0}}); }

Distribution Distribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("Bernoulli parameter must lie in [0, 1]");
  if (p == 0.0) return dirac(0.0);
  if (p == 1.0) return dirac(1.0);
  return discrete({{0.0, 1.0 - p}, {1.0, p}});
}

Distribution Distribution::piecewise_linear_cdf(std::vector<Knot> knots) {
  if (knots.size() < 2) throw ArgumentError("piecewise-linear CDF needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t)) throw ArgumentError("CDF knots must be finite");
    if (i > 0 && !(knots[i - 1].t < knots[i].t)) {
      throw ArgumentError("CDF knot abscissae must be strictly increasing");
    }
    if (i > 0 && knots[i].cdf < knots[i - 1].cdf) throw ArgumentError("CDF must be nondecreasing");
  }
  if (knots.front().cdf != 0.0 || knots.back().cdf != 1.0) {
    throw ArgumentError("CDF must run from 0 at the first knot to 1 at the last");
  }
  return Distribution(Kind::piecewise_linear_cdf, {}, std::move(knots), 0.0, 0.0);
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ArgumentError("exponential rate must be positive");
  return Distribution(Kind::exponential, {}, {}, rate, 0.0);
}

Distribution Distribution::pareto(double exponent, double scale) {
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw ArgumentError("Pareto exponent must exceed 1 (finite expectation)");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ArgumentError("Pareto scale must be positive");
  return Distribution(Kind::pareto, {}, {}, exponent, scale);
}

Distribution Distribution::uniform(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ArgumentError("uniform law needs finite a < b");
  }
  return Distribution(Kind::uniform, {}, {}, a, b);
}

Json Distribution::to_json() const {
  switch (kind_) {
    case Kind::discrete: {
      Json atoms = Json::array();
      for (const auto& a : atoms_) atoms.push_back({a.value, a.mass});
      return {{"kind", "discrete"}, {"atoms", atoms}};
    }
    case Kind::piecewise_linear_cdf: {
      Json knots = Json::array();
      for (const auto& k : knots_) knots.push_back({k.t, k.cdf});
      return {{"kind", "piecewise_linear_cdf"}, {"knots", knots}};
    }
    case Kind::exponential:
      return {{"kind", "exponential"}, {"rate", param_a_}};
    case Kind::pareto:
      return {{"kind", "pareto"}, {"exponent", param_a_}, {"scale", param_b_}};
    case Kind::uniform:
      return {{"kind", "uniform"}, {"a", param_a_}, {"b", param_b_}};
  }
  return {};
}

Distribution Distribution::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ArgumentError("distribution needs a \"kind\"");
  const std::string kind = j.at("kind");
  try {
    if (kind == "discrete") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      return discrete(std::move(atoms));
    }
    if (kind == "dirac") return dirac(j.at("value").get<double>());
    if (kind == "bernoulli") return bernoulli(j.value("p", 0.5));
    if (kind == "piecewise_linear_cdf") {
      std::vector<Knot> knots;
      for (const auto& k : j.at("knots")) knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
      return piecewise_linear_cdf(std::move(knots));
    }
    if (kind == "exponential") return exponential(j.value("rate", 1.0));
    if (kind == "pareto") return pareto(j.at("exponent").get<double>(), j.value("scale", 1.0));
    if (kind == "uniform") return uniform(j.at("a").get<double>(), j.at("b").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("malformed " + kind + " distribution: " + e.what());
  }
  throw ArgumentError("unknown distribution kind: " + kind);
}

std::string Distribution::label() const {
  switch (kind_) {
    case Kind::discrete:
      if (atoms_.size() == 1) return "dirac(" + fmt(atoms_[0].value) + ")";
      return "discrete(" + std::to_string(atoms_.size()) + " atoms)";
    case Kind::piecewise_linear_cdf:
      return "piecewise_linear_cdf(" + std::to_string(knots_.size()) + " knots)";
    case Kind::exponential:
      return "exponential(" + fmt(param_a_) + ")";
    case Kind::pareto:
      return "pareto(" + fmt(param_a_) + "," + fmt(param_b_) + ")";
    case Kind::uniform:
      return "uniform(" + fmt(param_a_) + "," + fmt(param_b_) + ")";
  }
  return "";
}

MonotoneCurve survival_curve(const Distribution& mu) { return mu.survival(); }

MonotoneCurve tail_quantile_curve(const Distribution& mu) { return mu.tail_quantile(); }

std::optional<Interval> tail_quantile(const Distribution& mu, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("tail level outside [0, 1]", {0.0, 1.0});
  switch (mu.kind()) {
    case Distribution::Kind::discrete: {
      const auto& atoms = mu.atoms_;
      const auto& levels = mu.levels_;
      const std::size_t m = atoms.size();
      if (p == 0.0) return Interval{atoms[m - 1].value, kInf};
      if (p == 1.0) return Interval{-kInf, atoms[0].value};
      // levels is strictly decreasing: find the last j with levels[j] >= p.
      std::size_t lo = 0;
      std::size_t hi = m;  // levels[m] == 0 < p
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (levels[mid] >= p) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (levels[lo] == p && lo > 0) return Interval{atoms[lo - 1].value, atoms[lo].value};
      return Interval::point(atoms[lo].value);
    }
    case Distribution::Kind::exponential:
      if (p == 0.0) return std::nullopt;
      if (p == 1.0) return Interval{-kInf, 0.0};
      return Interval::point((1.0 / mu.rate()) * -std::log(p));
    case Distribution::Kind::pareto:
      if (p == 0.0) return std::nullopt;
      if (p == 1.0) return Interval{-kInf, mu.scale()};
      return Interval::point(mu.scale() * std::pow(p, -1.0 / mu.exponent()));
    case Distribution::Kind::uniform:
      if (p == 0.0) return Interval{mu.upper(), kInf};
      if (p == 1.0) return Interval{-kInf, mu.lower()};
      return Interval::point(mu.upper() + p * (mu.lower() - mu.upper()));
    case Distribution::Kind::piecewise_linear_cdf:
      return eval(mu.tail_quantile(), p);
  }
  return std::nullopt;
}

double expectation(const Distribution& mu) {
  switch (mu.kind()) {
    case Distribution::Kind::discrete: {
      double total = 0.0;
      double e = 0.0;
      for (const auto& a : mu.atoms()) total += a.mass;
      for (const auto& a : mu.atoms()) e += a.value * (a.mass / total);
      return e;
    }
    case Distribution::Kind::piecewise_linear_cdf: {
      double e = 0.0;
      const auto& k = mu.knots();
      for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        e += (k[i + 1].cdf - k[i].cdf) * (k[i].t + k[i + 1].t) / 2.0;
      }
      return e;
    }
    case Distribution::Kind::exponential:
      return 1.0 / mu.rate();
    case Distribution::Kind::pareto:
      return mu.scale() * mu.exponent() / (mu.exponent() - 1.0);
    case Distribution::Kind::uniform:
      return (mu.lower() + mu.upper()) / 2.0;
  }
  return 0.0;
}

double moment(const Distribution& mu, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw ArgumentError("moment order must be positive");
  require_nonnegative_support(mu);
  switch (mu.kind()) {
    case Distribution::Kind::discrete: {
      double total = 0.0;
      double m = 0.0;
      for (const auto& a : mu.atoms()) total += a.mass;
      for (const auto& a : mu.atoms()) m += std::pow(a.value, q) * (a.mass / total);
      return m;
    }
    case Distribution::Kind::piecewise_linear_cdf: {
      double m = 0.0;
      const auto& k = mu.knots();
      for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        const double mass = k[i + 1].cdf - k[i].cdf;
        if (mass == 0.0) continue;
        const double t0 = k[i].t;
        const double t1 = k[i + 1].t;
        m += mass * (std::pow(t1, q + 1.0) - std::pow(t0, q + 1.0)) / ((q + 1.0) * (t1 - t0));
      }
      return m;
    }
    case Distribution::Kind::exponential:
      return std::tgamma(q + 1.0) / std::pow(mu.rate(), q);
    case Distribution::Kind::pareto:
      if (q >= mu.exponent()) {
        throw CapabilityError("Pareto moment of order " + fmt(q) + " diverges (exponent " +
                              fmt(mu.exponent()) + ")");
      }
      return std::pow(mu.scale(), q) * mu.exponent() / (mu.exponent() - q);
    case Distribution::Kind::uniform: {
      const double a = mu.lower();
      const double b = mu.upper();
      return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) / ((q + 1.0) * (b - a));
    }
  }
  return 0.0;
}

double moment_of_curve(const MonotoneCurve& beta, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw ArgumentError("moment order must be positive");
  double total = 0.0;
  for (const auto& s : beta.segments()) {
    if (s.vertical() || s.b.x <= 0.0) continue;
    const double x0 = std::max(s.a.x, 0.0);
    const double x1 = s.b.x;
    double part = 0.0;
    if (!s.shape) {
      const double slope = s.straight_slope();
      if (std::isinf(x1)) {
        if (slope == 0.0 && s.a.y == 0.0) continue;
        throw CapabilityError("moment diverges: profile does not vanish at +inf");
      }
      // value = c0 + slope u; antiderivative of value * q u^(q-1).
      const double c0 = s.value_at(x0) - slope * x0;
      auto prim = [&](double u) {
        const double uq = std::pow(u, q);
        return c0 * uq + (slope == 0.0 ? 0.0 : slope * q / (q + 1.0) * uq * u);
      };
      part = prim(x1) - prim(x0);
    } else {
      auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        return s.shape->value(u) * q * std::pow(u, q - 1.0);
      };
      if (std::isfinite(x1)) {
        boost::math::quadrature::tanh_sinh<double> integrator;
        part = integrator.integrate(f, x0, x1, 1e-12);
      } else {
        boost::math::quadrature::exp_sinh<double> integrator;
        part = integrator.integrate(f, x0, x1, 1e-12);
      }
    }
    if (!std::isfinite(part)) throw CapabilityError("moment diverges");
    total += part;
  }
  return total;
}

double sample(const Distribution& mu, Rng& rng) {
  return tail_quantile(mu, uniform01(rng))->lo;
}

}  // namespace sharpsum
