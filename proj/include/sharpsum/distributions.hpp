#pragma once

// Probability laws on the real line and their survival / tail-quantile
// operators.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sharpsum/monotone_curve.hpp"
#include "sharpsum/rng.hpp"

namespace sharpsum {

struct Atom {
  double value = 0.0;
  double mass = 0.0;
};

struct Knot {
  double t = 0.0;
  double cdf = 0.0;
};

class Distribution {
 public:
  enum class Kind { discrete, piecewise_linear_cdf, exponential, pareto, uniform };

  static Distribution discrete(std::vector<Atom> atoms);
  static Distribution dirac(double c);
  static Distribution bernoulli(double p = 0.5);
  static Distribution piecewise_linear_cdf(std::vector<Knot> knots);
  static Distribution exponential(double rate);
  // S(t) = min(1, (t / scale)^-exponent).
  static Distribution pareto(double exponent, double scale);
  static Distribution uniform(double a, double b);

  Kind kind() const { return kind_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Knot>& knots() const { return knots_; }
  double rate() const { return param_a_; }
  double exponent() const { return param_a_; }
  double scale() const { return param_b_; }
  double lower() const { return param_a_; }
  double upper() const { return param_b_; }

  bool is_dirac() const { return kind_ == Kind::discrete && atoms_.size() == 1; }

  const MonotoneCurve& survival() const { return *survival_; }
  const MonotoneCurve& tail_quantile() const { return *tail_quantile_; }

  Json to_json() const;
  static Distribution from_json(const Json& j);
  std::string label() const;

 private:
  Distribution(Kind kind, std::vector<Atom> atoms, std::vector<Knot> knots, double a, double b);

  Kind kind_;
  std::vector<Atom> atoms_;
  std::vector<Knot> knots_;
  double param_a_ = 0.0;
  double param_b_ = 0.0;
  // Tail sums P(X >= atom_j) for discrete laws, with levels_[0] == 1.
  std::vector<double> levels_;
  std::shared_ptr<const MonotoneCurve> survival_;
  std::shared_ptr<const MonotoneCurve> tail_quantile_;

  friend std::optional<Interval> tail_quantile(const Distribution&, double);
};

// S(t) = [P(X > t), P(X >= t)].
MonotoneCurve survival_curve(const Distribution& mu);
// T = S^-1.
MonotoneCurve tail_quantile_curve(const Distribution& mu);

// T(p) for p in [0, 1]; empty (nullopt) when no t has p in S(t), e.g. T(0) of
// an unbounded law. Agrees exactly with eval(tail_quantile_curve(mu), p).
std::optional<Interval> tail_quantile(const Distribution& mu, double p);

double expectation(const Distribution& mu);

// E[X^q] for a law supported on [0, inf).
double moment(const Distribution& mu, double q);

// Integral over u >= 0 of beta(u) q u^(q-1) du, i.e. the integral of
// beta(t^(1/q)) dt; for beta = S_X this is E[X^q].
double moment_of_curve(const MonotoneCurve& beta, double q);

// Inverse transform: lower endpoint of T(U).
double sample(const Distribution& mu, Rng& rng);

}  // namespace sharpsum
