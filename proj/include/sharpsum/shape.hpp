#pragma once

// Exact, strictly decreasing real functions used as the curved pieces of a
// MonotoneCurve. Every shape knows its value, its inverse, and its integral in
// closed form (or by a bracketed numerical fallback), so that operator
// inversion and Hardy transforms stay exact on transcendental profiles.

#include <memory>
#include <vector>

#include "json.hpp"
#include "sharpsum/interval.hpp"

namespace sharpsum {

class Shape;
using ShapePtr = std::shared_ptr<const Shape>;
using Json = nlohmann::json;

class Shape : public std::enable_shared_from_this<Shape> {
 public:
  virtual ~Shape() = default;

  // Open interval on which value() is defined.
  virtual Interval domain() const = 0;

  // Open interval of values, computed from the limits at the domain ends.
  virtual Interval range() const;

  virtual double value(double x) const = 0;

  // The x in [x_lo, x_hi] (clamped to the domain) with value(x) == y. The base
  // implementation bisects; shapes with a closed-form inverse override it.
  virtual double inverse(double y, double x_lo, double x_hi) const;

  // Integral of value() over [x0, x1]. Endpoints may sit on the (possibly
  // infinite) ends of the domain; a divergent integral returns +/-inf.
  virtual double integral(double x0, double x1) const = 0;

  // The shape whose graph is the transpose of this one.
  virtual ShapePtr inverted() const;

  virtual Json to_json() const = 0;

  ShapePtr self() const { return shared_from_this(); }
};

bool shapes_equal(const ShapePtr& a, const ShapePtr& b);
ShapePtr shape_from_json(const Json& j);

// x -> exp(-x) on the whole line.
class ExpShape final : public Shape {
 public:
  Interval domain() const override { return {-kInf, kInf, true, true}; }
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  ShapePtr inverted() const override;
  Json to_json() const override { return {{"shape", "exp"}}; }
};

// x -> -log(x) on (0, inf).
class LogShape final : public Shape {
 public:
  Interval domain() const override { return {0.0, kInf, true, true}; }
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  ShapePtr inverted() const override;
  Json to_json() const override { return {{"shape", "log"}}; }
};

// x -> x^-k on (0, inf) with k = exponent, or k = 1/exponent when reciprocal
// is set. Keeping the flag instead of computing 1/k makes inversion an exact
// involution.
class PowerShape final : public Shape {
 public:
  PowerShape(double exponent, bool reciprocal);
  Interval domain() const override { return {0.0, kInf, true, true}; }
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  ShapePtr inverted() const override;
  Json to_json() const override;

  double exponent() const { return exponent_; }
  bool reciprocal() const { return reciprocal_; }

 private:
  double exponent_;
  bool reciprocal_;
};

// Straight line through (x0, y0) with slope <= 0; only used as a summand.
class AffineShape final : public Shape {
 public:
  AffineShape(double x0, double y0, double slope);
  Interval domain() const override { return {-kInf, kInf, true, true}; }
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  Json to_json() const override;

  double slope() const { return slope_; }

 private:
  double x0_, y0_, slope_;
};

// p -> a + b p + c / p on (0, inf): the Hardy transform of a straight piece.
class HyperbolicShape final : public Shape {
 public:
  HyperbolicShape(double a, double b, double c);
  Interval domain() const override { return {0.0, kInf, true, true}; }
  double value(double x) const override;
  double integral(double x0, double x1) const override;
  Json to_json() const override;

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  double a_, b_, c_;
};

// Pointwise sum of shapes on the intersection of their domains.
class SumShape final : public Shape {
 public:
  explicit SumShape(std::vector<ShapePtr> terms);
  Interval domain() const override;
  double value(double x) const override;
  double integral(double x0, double x1) const override;
  Json to_json() const override;

 private:
  std::vector<ShapePtr> terms_;
};

// y = ay * base((x - bx) / ax) + by with ax, ay > 0.
class TransformedShape final : public Shape {
 public:
  TransformedShape(ShapePtr base, double ax, double bx, double ay, double by);
  Interval domain() const override;
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  ShapePtr inverted() const override;
  Json to_json() const override;

  const ShapePtr& base() const { return base_; }
  double ax() const { return ax_; }
  double bx() const { return bx_; }
  double ay() const { return ay_; }
  double by() const { return by_; }

 private:
  ShapePtr base_;
  double ax_, bx_, ay_, by_;
};

// Graph transpose of a base shape.
class InvertedShape final : public Shape {
 public:
  explicit InvertedShape(ShapePtr base);
  Interval domain() const override;
  double value(double x) const override;
  double inverse(double y, double x_lo, double x_hi) const override;
  double integral(double x0, double x1) const override;
  ShapePtr inverted() const override { return base_; }
  Json to_json() const override;

 private:
  ShapePtr base_;
};

// Running average p -> (i_ref + integral_{x_ref}^{p} base) / p.
class HardyShape final : public Shape {
 public:
  HardyShape(ShapePtr base, double x_ref, double i_ref);
  Interval domain() const override;
  double value(double x) const override;
  double integral(double x0, double x1) const override;
  Json to_json() const override;

 private:
  ShapePtr base_;
  double x_ref_, i_ref_;
};

// Affine reparametrisation helper: returns base itself when the map is the
// identity and folds nested TransformedShape layers.
ShapePtr transform_shape(const ShapePtr& base, double ax, double bx, double ay,
                         double by);

// Extended reals in JSON: finite numbers as numbers, infinities as "inf"/"-inf".
Json real_to_json(double v);
double real_from_json(const Json& j);

}  // namespace sharpsum
