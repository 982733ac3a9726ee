#pragma once

// Concentration bounds for sums of arbitrarily dependent variables: the
// Hardy-transform bound, its identically distributed form, the union bound,
// the closed-form power / exponential profiles, moment bounds and the
// power-versus-exponential convexity checks.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sharpsum/distributions.hpp"
#include "sharpsum/monotone_curve.hpp"

namespace sharpsum {

// Grid check that t -> g(t) is convex (or concave), compared through
// consecutive slopes.
struct ConvexityCertificate {
  std::string subject;
  bool passed = false;
  std::size_t grid_points = 0;
  double t_min = 0.0;
  double t_max = 0.0;
  double tolerance = 0.0;
  double worst_violation = 0.0;   // relative slope drop (convex) or rise (concave)
  std::array<double, 3> witness{};  // worst triple of grid points

  Json to_json() const;
};

class ConvexityError : public PreconditionError {
 public:
  ConvexityError(const std::string& what, ConvexityCertificate cert)
      : PreconditionError(what), cert_(std::move(cert)) {}
  const ConvexityCertificate& certificate() const { return cert_; }
  const std::array<double, 3>& witness() const { return cert_.witness; }

 private:
  ConvexityCertificate cert_;
};

struct GridSpec {
  std::size_t points = 512;
  double t_min = 1e-3;
  double decades = 6.0;
  double tolerance = 1e-9;
};

std::vector<double> geometric_grid(double t_min, double t_max, std::size_t points);

ConvexityCertificate certify_convex(const std::function<double(double)>& g,
                                    const std::vector<double>& grid, double tolerance,
                                    std::string subject, bool concave = false);

enum class BoundKind { theorem1, iid, naive_union, corollary_power, corollary_exp };

std::string to_string(BoundKind kind);

struct BoundReport {
  MonotoneCurve bound;
  std::vector<Distribution> inputs;
  BoundKind kind = BoundKind::theorem1;
  double constant = 1.0;  // multiplicative factor on alpha for corollary profiles
  double q = 0.0;
  int n = 0;
  std::vector<ConvexityCertificate> certificates;

  Json to_json() const;
};

// Survival bound for X_1 + ... + X_n: (H(T_1) + ... + H(T_n))^-1.
BoundReport theorem1_bound(const std::vector<Distribution>& mus);

// Survival bound for (X_1 + ... + X_n) / n with common marginal: H(T_mu)^-1.
BoundReport iid_bound(const Distribution& mu);

// min(1, n S_mu): the union bound for the sum at n t, i.e. for the average at t.
BoundReport naive_union_bound(const Distribution& mu, int n);

// (q/(q-1))^q alpha clipped at 1, given a certificate that alpha^(-1/q) is
// convex on both selections of alpha.
BoundReport corollary_power_bound(const MonotoneCurve& alpha, double q, const GridSpec& grid = {});

// e alpha clipped at 1, given a certificate that -log(alpha) is convex.
BoundReport corollary_exp_bound(const MonotoneCurve& alpha, const GridSpec& grid = {});

double power_factor(double q);

struct MomentBound {
  double lhs = 0.0;         // integral_0^1 H(T_mu)(p)^q dp
  double rhs = 0.0;         // (q/(q-1))^q M_q
  double jensen_rhs = 0.0;  // M_q
  bool holds = false;       // jensen_rhs <= lhs <= rhs
};

MomentBound moment_bound_check(const Distribution& mu, double q);

// m_{q,lambda}(a, b) = (lambda a^(-1/q) + (1 - lambda) b^(-1/q))^(-q).
double power_geometric_mean(double a, double b, double lambda, double q);

struct ConvexityVerdict {
  bool convex = false;
  bool concave = false;
  double convex_violation = 0.0;
  double concave_violation = 0.0;
};

struct EquivalenceReport {
  std::vector<double> qs;
  std::vector<ConvexityVerdict> power;  // f o Id^-q, one per q
  ConvexityVerdict exponential;         // f o E_1
  bool nondecreasing = false;
  bool nonincreasing = false;
  bool forward_holds = false;   // all-q convex => exp convex, same for concave
  bool converse_checked = false;
  bool converse_holds = false;  // monotone branch of the converse

  Json to_json() const;
};

// Grid points t > 0 are used for f o Id^-q; f o E_1 is checked at s = log t.
// With check_converse, f must be monotone on the sampled range.
EquivalenceReport convexity_equivalence_check(const std::function<double(double)>& f,
                                              const std::vector<double>& qs,
                                              const std::vector<double>& grid,
                                              double tolerance = 1e-9,
                                              bool check_converse = true);

}  // namespace sharpsum
