#pragma once

// The slot-variable coupling: n identically distributed variables with law mu
// whose average has survival profile close to S_{mu,p} for large n.

#include <cstdint>
#include <string>
#include <vector>

#include "sharpsum/distributions.hpp"

namespace sharpsum {

class SlotSystem {
 public:
  SlotSystem(Distribution mu, double p, int n);

  const Distribution& mu() const { return mu_; }
  double p() const { return p_; }
  int n() const { return n_; }
  // Index 0..n.
  const std::vector<double>& p_levels() const { return p_levels_; }
  const std::vector<double>& p_prime_levels() const { return p_prime_levels_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& u_prime() const { return u_prime_; }

  // u'_n <= ... <= u'_0 = u_0 <= ... <= u_n.
  bool chain_holds() const;
  // The 2n half-open slots are disjoint and tile [u'_n, u_n); mu puts no
  // mass below u'_n nor above u_n.
  bool partition_holds() const;

  // T_{mu_i}(s) = T_mu(p_i + (p/n) s), T_{mu'_i}(s) = T_mu(p'_{i-1} + ((1-p)/n) s),
  // for 1 <= i <= n and s in (0, 1).
  Interval slot_quantile(int i, double s, bool primed) const;
  // Closed slot [u_{i-1}, u_i] (or [u'_i, u'_{i-1}]) holding W_i (W'_i).
  Interval slot(int i, bool primed) const;

  Json to_json() const;

 private:
  double level(int i, double s, bool primed) const;

  Distribution mu_;
  double p_;
  int n_;
  std::vector<double> p_levels_;
  std::vector<double> p_prime_levels_;
  std::vector<double> u_;
  std::vector<double> u_prime_;
};

SlotSystem build_slot_system(const Distribution& mu, double p, int n);

// Survival curve of mu_i (mu'_i) built from S_mu by the affine level map and
// clipping; an independent route to the slot quantiles.
MonotoneCurve slot_survival(const SlotSystem& sys, int i, bool primed);

struct CouplingSample {
  std::vector<double> W;        // W_1..W_n
  std::vector<double> W_prime;  // W'_1..W'_n
  int slot_choice = 0;          // active cell: j-1 for eps_j, n + j-1 for eps'_j
  std::vector<double> X;        // X_1..X_n
  double Y = 0.0;               // eps mean(W) + (1 - eps) mean(W')
  bool in_slots = true;         // every W_i, W'_i inside its closed slot
};

CouplingSample sample_coupling(const SlotSystem& sys, Rng& rng);

// Only the average Y, drawing the indicator first and then the n slot
// variables it selects. Returns false in *in_slots on a slot violation.
double sample_average(const SlotSystem& sys, Rng& rng, bool* in_slots = nullptr);

struct MarginalCheck {
  int k = 0;
  int reps = 0;
  bool discrete = false;
  double distance = 0.0;  // total variation (discrete) or Kolmogorov-Smirnov
};

MarginalCheck marginal_check(const SlotSystem& sys, int k, int reps, std::uint64_t seed,
                             unsigned workers = 1);

struct SlotMeans {
  double exact_W = 0.0;        // H(T_mu)(p)
  double exact_W_prime = 0.0;  // H(T_mu)(p) - Delta_mu(p)
  double mc_W = 0.0;
  double mc_W_prime = 0.0;
  double se_W = 0.0;
  double se_W_prime = 0.0;
  double var_W = 0.0;  // sample variance of mean(W) across replications
  double var_W_prime = 0.0;
  int reps = 0;
  int slot_violations = 0;
};

SlotMeans slot_means(const SlotSystem& sys, int reps, std::uint64_t seed, unsigned workers = 1);

struct ProfileRow {
  int n = 0;
  double t = 0.0;
  double empirical = 0.0;   // P(Y_n >= t)
  double half_width = 0.0;  // 3 binomial standard deviations
  double limit_value = 0.0;
  bool near_jump = false;
};

struct SimulationResult {
  Json distribution;
  double p = 0.0;
  std::vector<int> ns;
  int reps = 0;
  std::uint64_t seed = 0;
  double a = 0.0;  // lower jump of S_{mu,p}
  double b = 0.0;  // upper jump
  double margin = 0.0;
  int slot_violations = 0;
  std::vector<ProfileRow> rows;

  std::string to_csv() const;
  Json summary() const;
};

struct SimulationConfig {
  double p = 0.5;
  std::vector<int> ns{10, 100, 1000};
  int reps = 10000;
  std::vector<double> thresholds;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double margin = 1e-3;
};

// Every replication draws from its own stream (seed, n, rep) and results are
// reduced in replication order, so output does not depend on `workers`.
// For p = 1 the averages are plain i.i.d. means and the limit is Incr_{E[X]}.
SimulationResult simulate_profile(const Distribution& mu, const SimulationConfig& cfg);

}  // namespace sharpsum
