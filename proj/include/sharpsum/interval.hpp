#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sharpsum {

// Real numbers extended with -inf and +inf. Only ordering and comparisons are
// relied upon at infinite values; inf - inf is never formed.
using ExtendedReal = double;

inline constexpr ExtendedReal kInf = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi] of the extended real line. The open flags are only
// meaningful for operator domains (e.g. dom(Id^-a) = (0, +inf)); values of an
// operator are always closed.
struct Interval {
  ExtendedReal lo = 0.0;
  ExtendedReal hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;

  static Interval point(double v) { return {v, v}; }

  bool is_singleton() const { return lo == hi; }
  bool contains(double x) const {
    return (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  }
  bool operator==(const Interval&) const = default;
};

std::string to_string(const Interval& iv);

// A <= B iff B_+ is contained in A_+ and A_- in B_-, i.e. A.lo <= B.lo and
// A.hi <= B.hi. Nested, distinct intervals are incomparable.
bool interval_leq(const Interval& a, const Interval& b, double tol = 0.0);

// x is not in the domain of the operator being evaluated.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, Interval domain)
      : std::domain_error(what), domain_(domain) {}
  const Interval& domain() const { return domain_; }

 private:
  Interval domain_;
};

// Invalid scalar argument (non-positive scale, p outside (0,1), ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is well formed but outside what the computation supports
// (infinite expectation, divergent moment, too many atoms).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical precondition failed to certify (e.g. convexity).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sharpsum
