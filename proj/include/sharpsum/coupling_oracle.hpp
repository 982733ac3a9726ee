#pragma once

// Brute-force adversaries: the exact worst coupling of two small discrete
// marginals, and a random search over rearrangement couplings for n >= 3.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "sharpsum/distributions.hpp"

namespace sharpsum {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kMaxOracleAtoms = 5;

struct TransportInstance {
  Distribution marginal_a;
  Distribution marginal_b;
  double t = 0.0;
};

struct OracleResult {
  Rational value;  // max P(X + Y >= t)
  double value_double = 0.0;
  std::vector<double> xs;  // atoms of marginal_a
  std::vector<double> ys;  // atoms of marginal_b
  std::vector<std::vector<Rational>> coupling;  // coupling[i][j] = P(X = xs[i], Y = ys[j])
  std::size_t bases_checked = 0;
  std::size_t feasible_bases = 0;
};

// Exact maximum of P(X + Y >= t) over all couplings, by enumerating the
// spanning-tree bases of the transportation polytope in rational arithmetic.
// Masses are normalized exactly by their rational totals.
OracleResult max_tail_two(const TransportInstance& inst, unsigned workers = 1);

// Row and column sums match the (normalized) marginals and all entries are >= 0.
bool coupling_feasible(const OracleResult& r, const TransportInstance& inst);

struct ProbeResult {
  double max_survival = 0.0;  // max over trials of P(mean(X) >= t)
  std::size_t best_trial = 0;
  std::size_t grid = 0;
  double sigma = 0.0;  // binomial standard deviation at the maximum
};

// Each coordinate takes the grid values T_mu((g + 1/2) / grid) through its own
// permutation of the grid index g. Trial 0 is comonotone, trial 1 antithetic
// (even coordinates reversed); later trials use random permutations.
ProbeResult random_coupling_probe(const Distribution& mu, int n, double t, std::size_t trials,
                                  std::uint64_t seed, std::size_t grid = 2000,
                                  unsigned workers = 1);

}  // namespace sharpsum
