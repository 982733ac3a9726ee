#include "sharpsum/sum_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sharpsum/hardy.hpp"

namespace sharpsum {

namespace {

// Relative drop between consecutive slopes; positive means a convexity
// violation.
double slope_drop(double left, double right) {
  return (left - right) / std::max({1.0, std::abs(left), std::abs(right)});
}

std::vector<double> corollary_grid(const MonotoneCurve& alpha, const GridSpec& spec) {
  const Interval d = alpha.domain();
  double lo = spec.t_min;
  double hi = spec.t_min * std::pow(10.0, spec.decades);
  if (d.lo >= lo) lo = d.lo_open ? std::nextafter(d.lo, kInf) : d.lo;
  if (d.hi <= hi) hi = d.hi_open ? std::nextafter(d.hi, -kInf) : d.hi;
  // Stop where alpha leaves the normal double range (E_1 underflows near 745).
  constexpr double kTiny = 1e-300;
  if (eval(alpha, hi).lo < kTiny && eval(alpha, lo).lo >= kTiny) {
    double a = lo;
    double b = hi;
    for (int i = 0; i < 200 && a < b; ++i) {
      const double m = a + (b - a) / 2.0;
      if (m <= a || m >= b) break;
      (eval(alpha, m).lo >= kTiny ? a : b) = m;
    }
    hi = a;
  }
  if (!(lo > 0.0 && lo < hi)) {
    throw ArgumentError("convexity grid does not meet the domain " + to_string(d));
  }
  return geometric_grid(lo, hi, spec.points);
}

// Certificates for both the lower and the upper selection of alpha, passed
// through `transform`.
std::vector<ConvexityCertificate> certify_selections(const MonotoneCurve& alpha,
                                                     const std::function<double(double)>& transform,
                                                     const std::string& name, const GridSpec& spec) {
  const Interval range = alpha.range();
  if (range.lo < 0.0 || (range.lo == 0.0 && !range.lo_open)) {
    ConvexityCertificate cert;
    cert.subject = name;
    for (const auto& v : alpha.vertices()) {
      if (v.y <= 0.0) {
        cert.witness = {v.x, v.x, v.x};
        break;
      }
    }
    throw ConvexityError("alpha must take values in (0, inf), but its range is " + to_string(range),
                         cert);
  }
  const auto grid = corollary_grid(alpha, spec);
  for (double t : grid) {
    const Interval v = eval(alpha, t);
    if (!(v.lo > 0.0)) {
      ConvexityCertificate cert;
      cert.subject = name;
      cert.witness = {t, t, t};
      std::ostringstream msg;
      msg << "alpha must be positive, but alpha(" << t << ") = " << to_string(v);
      throw ConvexityError(msg.str(), cert);
    }
  }
  std::vector<ConvexityCertificate> certs;
  for (int side = 0; side < 2; ++side) {
    auto g = [&](double t) {
      const Interval v = eval(alpha, t);
      return transform(side == 0 ? v.lo : v.hi);
    };
    auto cert = certify_convex(g, grid, spec.tolerance, name + (side == 0 ? " [lo]" : " [hi]"));
    if (!cert.passed) {
      std::ostringstream msg;
      msg.precision(17);
      msg << cert.subject << " is not convex on the grid; witness (" << cert.witness[0] << ", "
          << cert.witness[1] << ", " << cert.witness[2] << ")";
      throw ConvexityError(msg.str(), cert);
    }
    certs.push_back(cert);
  }
  return certs;
}

ConvexityVerdict verdict(const std::function<double(double)>& g, const std::vector<double>& grid,
                         double tol) {
  const auto cx = certify_convex(g, grid, tol, "", false);
  const auto cc = certify_convex(g, grid, tol, "", true);
  return {cx.passed, cc.passed, cx.worst_violation, cc.worst_violation};
}

Json verdict_json(const ConvexityVerdict& v) {
  return {{"convex", v.convex},
          {"concave", v.concave},
          {"convex_violation", v.convex_violation},
          {"concave_violation", v.concave_violation}};
}

}  // namespace

Json ConvexityCertificate::to_json() const {
  return {{"subject", subject},     {"passed", passed},
          {"grid_points", grid_points}, {"t_min", t_min},
          {"t_max", t_max},         {"tolerance", tolerance},
          {"worst_violation", worst_violation},
          {"witness", {witness[0], witness[1], witness[2]}}};
}

std::vector<double> geometric_grid(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0.0 && t_min < t_max) || points < 3) {
    throw ArgumentError("geometric grid needs 0 < t_min < t_max and at least 3 points");
  }
  std::vector<double> grid(points);
  const double step = std::log(t_max / t_min) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = t_min * std::exp(step * static_cast<double>(k));
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

ConvexityCertificate certify_convex(const std::function<double(double)>& g,
                                    const std::vector<double>& grid, double tolerance,
                                    std::string subject, bool concave) {
  ConvexityCertificate cert;
  cert.subject = std::move(subject);
  cert.grid_points = grid.size();
  cert.t_min = grid.front();
  cert.t_max = grid.back();
  cert.tolerance = tolerance;
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = g(grid[k]);
  double worst = -kInf;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double left = (values[k] - values[k - 1]) / (grid[k] - grid[k - 1]);
    const double right = (values[k + 1] - values[k]) / (grid[k + 1] - grid[k]);
    const double v = concave ? slope_drop(right, left) : slope_drop(left, right);
    if (v > worst || std::isnan(v)) {
      worst = std::isnan(v) ? kInf : v;
      cert.witness = {grid[k - 1], grid[k], grid[k + 1]};
    }
  }
  cert.worst_violation = std::max(worst, 0.0);
  cert.passed = cert.worst_violation <= tolerance;
  return cert;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::theorem1:
      return "theorem1";
    case BoundKind::iid:
      return "iid";
    case BoundKind::naive_union:
      return "naive_union";
    case BoundKind::corollary_power:
      return "corollary_power";
    case BoundKind::corollary_exp:
      return "corollary_exp";
  }
  return "";
}

Json BoundReport::to_json() const {
  Json ins = Json::array();
  for (const auto& mu : inputs) ins.push_back(mu.to_json());
  Json certs = Json::array();
  for (const auto& c : certificates) certs.push_back(c.to_json());
  Json j = {{"kind", to_string(kind)}, {"constant", constant}, {"inputs", ins},
            {"bound", bound.to_json()}, {"convexity_certificates", certs}};
  if (q > 0.0) j["q"] = q;
  if (n > 0) j["n"] = n;
  return j;
}

BoundReport theorem1_bound(const std::vector<Distribution>& mus) {
  if (mus.empty()) throw ArgumentError("theorem1_bound needs at least one distribution");
  std::vector<MonotoneCurve> hs;
  for (const auto& mu : mus) hs.push_back(hardy_of(mu).curve);
  BoundReport r{invert(pointwise_sum(hs)), mus, BoundKind::theorem1};
  r.n = static_cast<int>(mus.size());
  return r;
}

BoundReport iid_bound(const Distribution& mu) {
  return BoundReport{invert(hardy_of(mu).curve), {mu}, BoundKind::iid};
}

BoundReport naive_union_bound(const Distribution& mu, int n) {
  if (n < 1) throw ArgumentError("naive_union_bound needs n >= 1");
  BoundReport r{clip_y(scale(survival_curve(mu), n, Axis::y), -kInf, 1.0), {mu},
                BoundKind::naive_union, static_cast<double>(n)};
  r.n = n;
  return r;
}

double power_factor(double q) {
  if (!(q > 1.0)) throw ArgumentError("power profile needs q > 1");
  return std::pow(q / (q - 1.0), q);
}

BoundReport corollary_power_bound(const MonotoneCurve& alpha, double q, const GridSpec& grid) {
  const double factor = power_factor(q);
  auto certs = certify_selections(
      alpha, [q](double v) { return std::pow(v, -1.0 / q); },
      "alpha^(-1/" + std::to_string(q) + ")", grid);
  BoundReport r{clip_y(scale(alpha, factor, Axis::y), -kInf, 1.0), {}, BoundKind::corollary_power,
                factor, q};
  r.certificates = std::move(certs);
  return r;
}

BoundReport corollary_exp_bound(const MonotoneCurve& alpha, const GridSpec& grid) {
  auto certs = certify_selections(alpha, [](double v) { return -std::log(v); }, "-log(alpha)", grid);
  BoundReport r{clip_y(scale(alpha, std::numbers::e, Axis::y), -kInf, 1.0), {},
                BoundKind::corollary_exp, std::numbers::e};
  r.certificates = std::move(certs);
  return r;
}

MomentBound moment_bound_check(const Distribution& mu, double q) {
  if (!(q > 1.0)) throw ArgumentError("moment bound needs q > 1");
  const double mq = moment(mu, q);  // throws on negative support / divergence
  const auto h = hardy_of(mu).curve;
  double lhs = 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (const auto& s : h.segments()) {
    if (s.vertical()) continue;
    const double p0 = std::max(s.a.x, 0.0);
    const double p1 = std::min(s.b.x, 1.0);
    if (!(p0 < p1)) continue;
    if (!s.shape && s.a.y == s.b.y) {
      lhs += std::pow(s.a.y, q) * (p1 - p0);
      continue;
    }
    auto f = [&](double p) { return std::pow(s.value_at(p), q); };
    lhs += integrator.integrate(f, p0, p1, 1e-13);
  }
  if (!std::isfinite(lhs)) throw CapabilityError("integral of H(T)^q diverges");
  MomentBound m{lhs, power_factor(q) * mq, mq};
  const double tol = 1e-8 * std::max(1.0, m.rhs);
  m.holds = m.jensen_rhs <= m.lhs + tol && m.lhs <= m.rhs + tol;
  return m;
}

double power_geometric_mean(double a, double b, double lambda, double q) {
  if (!(a > 0.0 && b > 0.0)) throw ArgumentError("power mean needs a, b > 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("power mean needs lambda in [0, 1]");
  if (!(q > 0.0)) throw ArgumentError("power mean needs q > 0");
  // 1 + s = lambda a^(-1/q) + (1 - lambda) b^(-1/q), kept accurate for large q.
  const double s = lambda * std::expm1(-std::log(a) / q) + (1.0 - lambda) * std::expm1(-std::log(b) / q);
  return std::exp(-q * std::log1p(s));
}

Json EquivalenceReport::to_json() const {
  Json ps = Json::array();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    Json j = verdict_json(power[i]);
    j["q"] = qs[i];
    ps.push_back(j);
  }
  return {{"power", ps},
          {"exponential", verdict_json(exponential)},
          {"nondecreasing", nondecreasing},
          {"nonincreasing", nonincreasing},
          {"forward_holds", forward_holds},
          {"converse_checked", converse_checked},
          {"converse_holds", converse_holds}};
}

EquivalenceReport convexity_equivalence_check(const std::function<double(double)>& f,
                                              const std::vector<double>& qs,
                                              const std::vector<double>& grid, double tolerance,
                                              bool check_converse) {
  if (qs.empty()) throw ArgumentError("need at least one q");
  if (grid.size() < 3 || !std::is_sorted(grid.begin(), grid.end()) || !(grid.front() > 0.0)) {
    throw ArgumentError("grid must be increasing, positive and have at least 3 points");
  }
  EquivalenceReport r;
  r.qs = qs;
  std::vector<double> args;
  for (double q : qs) {
    if (!(q > 0.0)) throw ArgumentError("q must be positive");
    r.power.push_back(verdict([&](double t) { return f(std::pow(t, -q)); }, grid, tolerance));
    for (double t : grid) args.push_back(std::pow(t, -q));
  }
  std::vector<double> sgrid;
  for (double t : grid) sgrid.push_back(std::log(t));
  r.exponential = verdict([&](double s) { return f(std::exp(-s)); }, sgrid, tolerance);
  for (double s : sgrid) args.push_back(std::exp(-s));

  std::sort(args.begin(), args.end());
  r.nondecreasing = r.nonincreasing = true;
  double prev = f(args.front());
  for (std::size_t k = 1; k < args.size(); ++k) {
    const double cur = f(args[k]);
    const double slack = tolerance * std::max({1.0, std::abs(prev), std::abs(cur)});
    if (cur < prev - slack) r.nondecreasing = false;
    if (cur > prev + slack) r.nonincreasing = false;
    prev = cur;
  }

  const bool all_convex = std::all_of(r.power.begin(), r.power.end(), [](auto& v) { return v.convex; });
  const bool all_concave =
      std::all_of(r.power.begin(), r.power.end(), [](auto& v) { return v.concave; });
  r.forward_holds = (!all_convex || r.exponential.convex) && (!all_concave || r.exponential.concave);

  if (check_converse) {
    if (!r.nondecreasing && !r.nonincreasing) {
      throw PreconditionError("converse direction needs a monotone f on the sampled range");
    }
    r.converse_checked = true;
    r.converse_holds = true;
    if (r.nondecreasing && r.exponential.convex) r.converse_holds = r.converse_holds && all_convex;
    if (r.nonincreasing && r.exponential.concave) r.converse_holds = r.converse_holds && all_concave;
  }
  return r;
}

}  // namespace sharpsum
