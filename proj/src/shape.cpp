#include "sharpsum/shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sharpsum {

namespace {

// y * x with the convention 0 * inf = 0 (boundary terms of integration by
// parts vanish at integrable singularities).
double boundary_product(double y, double x) {
  if (y == 0.0 || x == 0.0) return 0.0;
  return y * x;
}

double next_probe(double lo, double hi) {
  if (lo == 0.0 && hi > 0.0) return hi / 16.0;
  if (hi == 0.0 && lo < 0.0) return lo / 16.0;
  if (lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
  if (hi < 0.0 && lo < 4.0 * hi) return -std::sqrt(-lo) * std::sqrt(-hi);
  return lo + (hi - lo) / 2.0;
}

}  // namespace

Interval Shape::range() const {
  const Interval d = domain();
  return {value(d.hi), value(d.lo), true, true};
}

double Shape::inverse(double y, double x_lo, double x_hi) const {
  const Interval d = domain();
  double lo = std::max(x_lo, d.lo);
  double hi = std::min(x_hi, d.hi);
  if (std::isfinite(lo) && !(lo == d.lo && d.lo_open) && value(lo) <= y) return lo;
  if (std::isfinite(hi) && !(hi == d.hi && d.hi_open) && value(hi) >= y) return hi;

  if (!std::isfinite(hi)) {
    const double base = std::isfinite(lo) ? lo : 0.0;
    double step = 1.0;
    double h = base + step;
    while (value(h) > y) {
      if (!std::isfinite(h)) return kInf;
      lo = h;
      step *= 2.0;
      h = base + step;
    }
    hi = h;
  }
  if (!std::isfinite(lo)) {
    const double base = std::isfinite(hi) ? hi : 0.0;
    double step = 1.0;
    double l = base - step;
    while (value(l) < y) {
      if (!std::isfinite(l)) return -kInf;
      hi = l;
      step *= 2.0;
      l = base - step;
    }
    lo = l;
  }
  for (int iter = 0; iter < 4096; ++iter) {
    const double mid = next_probe(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    if (value(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(value(lo) - y) <= std::abs(value(hi) - y) ? lo : hi;
}

ShapePtr Shape::inverted() const {
  return std::make_shared<InvertedShape>(self());
}

bool shapes_equal(const ShapePtr& a, const ShapePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->to_json() == b->to_json();
}

// ---------------------------------------------------------------------------

double ExpShape::value(double x) const { return std::exp(-x); }

double ExpShape::inverse(double y, double, double) const {
  if (y <= 0.0) return kInf;
  return -std::log(y);
}

double ExpShape::integral(double x0, double x1) const {
  return std::exp(-x0) - std::exp(-x1);
}

ShapePtr ExpShape::inverted() const { return std::make_shared<LogShape>(); }

double LogShape::value(double x) const { return -std::log(x); }

double LogShape::inverse(double y, double, double) const { return std::exp(-y); }

double LogShape::integral(double x0, double x1) const {
  auto antiderivative = [](double x) {
    if (x == 0.0) return 0.0;
    if (!std::isfinite(x)) return -kInf;
    return x - x * std::log(x);
  };
  return antiderivative(x1) - antiderivative(x0);
}

ShapePtr LogShape::inverted() const { return std::make_shared<ExpShape>(); }

PowerShape::PowerShape(double exponent, bool reciprocal)
    : exponent_(exponent), reciprocal_(reciprocal) {
  if (!(exponent > 0.0)) throw ArgumentError("power exponent must be positive");
}

double PowerShape::value(double x) const {
  return reciprocal_ ? std::pow(x, -1.0 / exponent_) : std::pow(x, -exponent_);
}

double PowerShape::inverse(double y, double, double) const {
  return reciprocal_ ? std::pow(y, -exponent_) : std::pow(y, -1.0 / exponent_);
}

double PowerShape::integral(double x0, double x1) const {
  const double k = reciprocal_ ? 1.0 / exponent_ : exponent_;
  if (k == 1.0) return std::log(x1) - std::log(x0);
  const double e = 1.0 - k;
  return (std::pow(x1, e) - std::pow(x0, e)) / e;
}

ShapePtr PowerShape::inverted() const {
  return std::make_shared<PowerShape>(exponent_, !reciprocal_);
}

Json PowerShape::to_json() const {
  return {{"shape", "power"}, {"exponent", exponent_}, {"reciprocal", reciprocal_}};
}

AffineShape::AffineShape(double x0, double y0, double slope)
    : x0_(x0), y0_(y0), slope_(slope) {
  if (slope > 0.0) throw ArgumentError("affine summand must be nonincreasing");
}

double AffineShape::value(double x) const {
  if (slope_ == 0.0) return y0_;
  return y0_ + slope_ * (x - x0_);
}

double AffineShape::inverse(double y, double x_lo, double x_hi) const {
  if (slope_ == 0.0) return Shape::inverse(y, x_lo, x_hi);
  return x0_ + (y - y0_) / slope_;
}

double AffineShape::integral(double x0, double x1) const {
  if (x0 == x1) return 0.0;
  auto antiderivative = [&](double x) {
    const double d = x - x0_;
    double r = y0_ == 0.0 ? 0.0 : y0_ * d;
    if (slope_ != 0.0) r += 0.5 * slope_ * d * d;
    return r;
  };
  return antiderivative(x1) - antiderivative(x0);
}

Json AffineShape::to_json() const {
  return {{"shape", "affine"}, {"x0", real_to_json(x0_)}, {"y0", real_to_json(y0_)},
          {"slope", slope_}};
}

HyperbolicShape::HyperbolicShape(double a, double b, double c) : a_(a), b_(b), c_(c) {}

double HyperbolicShape::value(double x) const {
  double v = a_;
  if (b_ != 0.0) v += b_ * x;
  if (c_ != 0.0) v += c_ / x;
  return v;
}

double HyperbolicShape::integral(double x0, double x1) const {
  if (x0 == x1) return 0.0;
  double r = 0.0;
  if (a_ != 0.0) r += a_ * (x1 - x0);
  if (b_ != 0.0) r += 0.5 * b_ * (x1 * x1 - x0 * x0);
  if (c_ != 0.0) r += c_ * (std::log(x1) - std::log(x0));
  return r;
}

Json HyperbolicShape::to_json() const {
  return {{"shape", "hyperbolic"}, {"a", a_}, {"b", b_}, {"c", c_}};
}

SumShape::SumShape(std::vector<ShapePtr> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ArgumentError("empty shape sum");
}

Interval SumShape::domain() const {
  Interval d{-kInf, kInf, true, true};
  for (const auto& t : terms_) {
    const Interval td = t->domain();
    if (td.lo > d.lo || (td.lo == d.lo && td.lo_open)) {
      d.lo = td.lo;
      d.lo_open = td.lo_open;
    }
    if (td.hi < d.hi || (td.hi == d.hi && td.hi_open)) {
      d.hi = td.hi;
      d.hi_open = td.hi_open;
    }
  }
  return d;
}

double SumShape::value(double x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t->value(x);
  return v;
}

double SumShape::integral(double x0, double x1) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t->integral(x0, x1);
  return v;
}

Json SumShape::to_json() const {
  Json terms = Json::array();
  for (const auto& t : terms_) terms.push_back(t->to_json());
  return {{"shape", "sum"}, {"terms", terms}};
}

TransformedShape::TransformedShape(ShapePtr base, double ax, double bx, double ay,
                                   double by)
    : base_(std::move(base)), ax_(ax), bx_(bx), ay_(ay), by_(by) {
  if (!(ax > 0.0) || !(ay > 0.0)) throw ArgumentError("transform scales must be positive");
}

Interval TransformedShape::domain() const {
  Interval d = base_->domain();
  d.lo = ax_ * d.lo + bx_;
  d.hi = ax_ * d.hi + bx_;
  return d;
}

double TransformedShape::value(double x) const {
  return ay_ * base_->value((x - bx_) / ax_) + by_;
}

double TransformedShape::inverse(double y, double x_lo, double x_hi) const {
  return ax_ * base_->inverse((y - by_) / ay_, (x_lo - bx_) / ax_, (x_hi - bx_) / ax_) + bx_;
}

double TransformedShape::integral(double x0, double x1) const {
  if (x0 == x1) return 0.0;
  double r = ay_ * ax_ * base_->integral((x0 - bx_) / ax_, (x1 - bx_) / ax_);
  if (by_ != 0.0) r += by_ * (x1 - x0);
  return r;
}

ShapePtr TransformedShape::inverted() const {
  return transform_shape(base_->inverted(), ay_, by_, ax_, bx_);
}

Json TransformedShape::to_json() const {
  return {{"shape", "transformed"}, {"base", base_->to_json()}, {"ax", ax_},
          {"bx", bx_},          {"ay", ay_},                 {"by", by_}};
}

ShapePtr transform_shape(const ShapePtr& base, double ax, double bx, double ay,
                         double by) {
  if (ax == 1.0 && bx == 0.0 && ay == 1.0 && by == 0.0) return base;
  if (auto t = std::dynamic_pointer_cast<const TransformedShape>(base)) {
    return transform_shape(t->base(), ax * t->ax(), bx + ax * t->bx(), ay * t->ay(),
                           ay * t->by() + by);
  }
  return std::make_shared<TransformedShape>(base, ax, bx, ay, by);
}

InvertedShape::InvertedShape(ShapePtr base) : base_(std::move(base)) {}

Interval InvertedShape::domain() const { return base_->range(); }

double InvertedShape::value(double x) const {
  const Interval d = base_->domain();
  return base_->inverse(x, d.lo, d.hi);
}

double InvertedShape::inverse(double y, double, double) const { return base_->value(y); }

double InvertedShape::integral(double y0, double y1) const {
  if (y0 == y1) return 0.0;
  const double xa = value(y0);
  const double xb = value(y1);
  return boundary_product(y1, xb) - boundary_product(y0, xa) + base_->integral(xb, xa);
}

Json InvertedShape::to_json() const {
  return {{"shape", "inverted"}, {"base", base_->to_json()}};
}

HardyShape::HardyShape(ShapePtr base, double x_ref, double i_ref)
    : base_(std::move(base)), x_ref_(x_ref), i_ref_(i_ref) {}

Interval HardyShape::domain() const {
  Interval d = base_->domain();
  if (d.lo < 0.0) {
    d.lo = 0.0;
    d.lo_open = true;
  }
  return d;
}

double HardyShape::value(double p) const {
  // 0/0 and inf/inf at the ends; the running average tends to base there.
  if (p == 0.0 || std::isinf(p)) return base_->value(p);
  if (p >= x_ref_) return (i_ref_ + base_->integral(x_ref_, p)) / p;
  return (i_ref_ - base_->integral(p, x_ref_)) / p;
}

double HardyShape::integral(double x0, double x1) const {
  if (x0 == x1) return 0.0;
  auto f = [this](double p) { return value(p); };
  if (std::isfinite(x1)) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, x0, x1);
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, x0, x1);
}

Json HardyShape::to_json() const {
  return {{"shape", "hardy"}, {"base", base_->to_json()}, {"x_ref", x_ref_},
          {"i_ref", i_ref_}};
}

// ---------------------------------------------------------------------------

Json real_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ArgumentError("invalid extended real: " + s);
  }
  return j.get<double>();
}

ShapePtr shape_from_json(const Json& j) {
  const std::string kind = j.at("shape");
  if (kind == "exp") return std::make_shared<ExpShape>();
  if (kind == "log") return std::make_shared<LogShape>();
  if (kind == "power") {
    return std::make_shared<PowerShape>(j.at("exponent").get<double>(),
                                        j.at("reciprocal").get<bool>());
  }
  if (kind == "affine") {
    return std::make_shared<AffineShape>(real_from_json(j.at("x0")), real_from_json(j.at("y0")),
                                         j.at("slope").get<double>());
  }
  if (kind == "hyperbolic") {
    return std::make_shared<HyperbolicShape>(j.at("a"), j.at("b"), j.at("c"));
  }
  if (kind == "sum") {
    std::vector<ShapePtr> terms;
    for (const auto& t : j.at("terms")) terms.push_back(shape_from_json(t));
    return std::make_shared<SumShape>(std::move(terms));
  }
  if (kind == "transformed") {
    return std::make_shared<TransformedShape>(shape_from_json(j.at("base")), j.at("ax"),
                                              j.at("bx"), j.at("ay"), j.at("by"));
  }
  if (kind == "inverted") return std::make_shared<InvertedShape>(shape_from_json(j.at("base")));
  if (kind == "hardy") {
    return std::make_shared<HardyShape>(shape_from_json(j.at("base")), j.at("x_ref"),
                                        j.at("i_ref"));
  }
  throw ArgumentError("unknown shape kind: " + kind);
}

}  // namespace sharpsum
