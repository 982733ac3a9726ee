#pragma once

// Hardy transform H(f)(p) = (1/p) * integral_0^p f, the gap Delta_mu(p) and
// the two-jump limiting survival profile S_{mu,p}.

#include <optional>
#include <vector>

#include "sharpsum/distributions.hpp"
#include "sharpsum/monotone_curve.hpp"

namespace sharpsum {

// One piece of H(f) on [p0, p1]. Straight pieces of f give
// value = a + b p + c / p; curved pieces carry the running-average shape.
struct HardyPiece {
  double p0 = 0.0;
  double p1 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  ShapePtr curved;  // set when f is curved on this piece
};

struct HardyProfile {
  MonotoneCurve base;
  MonotoneCurve curve;
  std::vector<HardyPiece> pieces;
  std::optional<Interval> endpoint_zero;  // H(f)(0) = f(0)
  // p_f and the upper end of the half-line H(f)(p_f) = (-inf, value].
  std::optional<std::pair<double, double>> endpoint_pf;

  Json to_json() const;
};

HardyProfile hardy_transform(const MonotoneCurve& f);

// H(T_mu), cached per call site by the caller if needed.
HardyProfile hardy_of(const Distribution& mu);

// Singleton value H(T_mu)(p) for p in (0, 1].
double hardy_value(const Distribution& mu, double p);

// (H(T_mu)(p) - E[X]) / (1 - p) for p in (0, 1).
double delta(const Distribution& mu, double p);

// S_{mu,p}: 1 below H - Delta, p between, 0 above H; Incr_{E[X]} at p = 1.
MonotoneCurve limiting_survival(const Distribution& mu, double p);

}  // namespace sharpsum
