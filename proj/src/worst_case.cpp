#include "sharpsum/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sharpsum/format.hpp"
#include "sharpsum/hardy.hpp"

namespace sharpsum {

namespace {

std::optional<Interval> quantile_or_empty(const Distribution& mu, double level) {
  return tail_quantile(mu, level);
}

// Active cell: 0..n-1 for eps_1..eps_n, n..2n-1 for eps'_1..eps'_n.
int draw_cell(double p, int n, Rng& rng) {
  const double u = uniform01(rng);
  if (u < p) {
    const int j = static_cast<int>(u / p * n);
    return std::min(j, n - 1);
  }
  const int j = static_cast<int>((u - p) / (1.0 - p) * n);
  return n + std::min(j, n - 1);
}

double draw_slot(const SlotSystem& sys, int i, bool primed, Rng& rng, bool& ok) {
  const Interval q = sys.slot_quantile(i, uniform01(rng), primed);
  const Interval box = sys.slot(i, primed);
  // A level landing exactly on p'_i (possible after clamping) must take the
  // upper end of T there to stay in the slot.
  double w = q.lo;
  if (primed && w < box.lo) w = q.hi;
  if (w < box.lo || w > box.hi) ok = false;
  return w;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

SlotSystem::SlotSystem(Distribution mu, double p, int n) : mu_(std::move(mu)), p_(p), n_(n) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("slot system needs p in (0, 1)");
  if (n < 1) throw ArgumentError("slot system needs n >= 1");
  const double e = expectation(mu_);
  if (!std::isfinite(e)) throw CapabilityError("slot system needs a finite expectation");

  p_levels_.resize(n + 1);
  p_prime_levels_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double w = static_cast<double>(n - i) / n;
    p_levels_[i] = w * p;
    p_prime_levels_[i] = static_cast<double>(i) / n + w * p;
  }
  p_levels_[0] = p;
  p_prime_levels_[0] = p;

  u_.resize(n + 1);
  u_prime_.resize(n + 1);
  const auto t0 = quantile_or_empty(mu_, p);
  u_[0] = t0->lo;
  u_prime_[0] = u_[0];
  for (int i = 1; i <= n; ++i) {
    const auto a = quantile_or_empty(mu_, p_levels_[i]);
    u_[i] = a ? a->lo : kInf;
    const auto b = quantile_or_empty(mu_, p_prime_levels_[i]);
    u_prime_[i] = b ? b->hi : -kInf;
  }
  if (!chain_holds()) throw PreconditionError("slot thresholds are not ordered");
  if (!partition_holds()) throw PreconditionError("slots do not cover the support");
}

bool SlotSystem::chain_holds() const {
  if (u_[0] != u_prime_[0]) return false;
  for (int i = 1; i <= n_; ++i) {
    if (!(u_[i - 1] <= u_[i])) return false;
    if (!(u_prime_[i] <= u_prime_[i - 1])) return false;
  }
  return true;
}

bool SlotSystem::partition_holds() const {
  // Ordered slots [u'_n, u'_{n-1}), ..., [u'_1, u'_0), [u_0, u_1), ..., [u_{n-1}, u_n):
  // consecutive ends coincide by construction, so they tile [u'_n, u_n) as long
  // as the chain is ordered.
  if (!chain_holds()) return false;
  const MonotoneCurve& s = mu_.survival();
  if (std::isfinite(u_prime_[n_]) && eval(s, u_prime_[n_]).hi != 1.0) return false;
  if (std::isfinite(u_[n_]) && eval(s, u_[n_]).lo != 0.0) return false;
  return true;
}

double SlotSystem::level(int i, double s, bool primed) const {
  if (i < 1 || i > n_) throw ArgumentError("slot index out of range");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("slot argument outside (0, 1)", {0.0, 1.0});
  if (primed) {
    const double v = p_prime_levels_[i - 1] + ((1.0 - p_) / n_) * s;
    return std::clamp(v, p_prime_levels_[i - 1], p_prime_levels_[i]);
  }
  const double v = p_levels_[i] + (p_ / n_) * s;
  return std::clamp(v, p_levels_[i], p_levels_[i - 1]);
}

Interval SlotSystem::slot_quantile(int i, double s, bool primed) const {
  return *tail_quantile(mu_, level(i, s, primed));
}

Interval SlotSystem::slot(int i, bool primed) const {
  if (i < 1 || i > n_) throw ArgumentError("slot index out of range");
  if (primed) return {u_prime_[i], u_prime_[i - 1]};
  return {u_[i - 1], u_[i]};
}

Json SlotSystem::to_json() const {
  Json u = Json::array();
  Json up = Json::array();
  for (int i = 0; i <= n_; ++i) {
    u.push_back(real_to_json(u_[i]));
    up.push_back(real_to_json(u_prime_[i]));
  }
  return {{"distribution", mu_.to_json()},
          {"p", p_},
          {"n", n_},
          {"p_levels", p_levels_},
          {"p_prime_levels", p_prime_levels_},
          {"u", u},
          {"u_prime", up}};
}

SlotSystem build_slot_system(const Distribution& mu, double p, int n) { return {mu, p, n}; }

MonotoneCurve slot_survival(const SlotSystem& sys, int i, bool primed) {
  if (i < 1 || i > sys.n()) throw ArgumentError("slot index out of range");
  const double base = primed ? sys.p_prime_levels()[i - 1] : sys.p_levels()[i];
  const double width = primed ? (1.0 - sys.p()) / sys.n() : sys.p() / sys.n();
  MonotoneCurve c = shift(sys.mu().survival(), -base, Axis::y);
  c = scale(c, 1.0 / width, Axis::y);
  return clip_y(c, 0.0, 1.0);
}

CouplingSample sample_coupling(const SlotSystem& sys, Rng& rng) {
  const int n = sys.n();
  CouplingSample out;
  out.slot_choice = draw_cell(sys.p(), n, rng);
  out.W.resize(n);
  out.W_prime.resize(n);
  for (int i = 1; i <= n; ++i) out.W[i - 1] = draw_slot(sys, i, false, rng, out.in_slots);
  for (int i = 1; i <= n; ++i) out.W_prime[i - 1] = draw_slot(sys, i, true, rng, out.in_slots);

  const bool eps = out.slot_choice < n;
  const int j = (eps ? out.slot_choice : out.slot_choice - n) + 1;
  const std::vector<double>& src = eps ? out.W : out.W_prime;
  out.X.resize(n);
  for (int k = 1; k <= n; ++k) {
    // sigma_k(i) = j  <=>  i = j - k + 1 (mod n)
    int i = j - k + 1;
    if (i <= 0) i += n;
    out.X[k - 1] = src[i - 1];
  }
  out.Y = eps ? mean_of(out.W) : mean_of(out.W_prime);
  const double check = mean_of(out.X);
  if (std::abs(check - out.Y) > 1e-12 * std::max(1.0, std::abs(out.Y))) {
    throw std::logic_error("average of X disagrees with the slot expression");
  }
  return out;
}

double sample_average(const SlotSystem& sys, Rng& rng, bool* in_slots) {
  const int n = sys.n();
  const bool primed = draw_cell(sys.p(), n, rng) >= n;
  bool ok = true;
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += draw_slot(sys, i, primed, rng, ok);
  if (in_slots) *in_slots = ok;
  return s / n;
}

MarginalCheck marginal_check(const SlotSystem& sys, int k, int reps, std::uint64_t seed,
                             unsigned workers) {
  if (k < 1 || k > sys.n()) throw ArgumentError("marginal index out of range");
  if (reps < 1) throw ArgumentError("marginal check needs reps >= 1");
  std::vector<double> xs(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    Rng rng = make_stream(seed, "marginal", {static_cast<std::uint64_t>(sys.n()),
                                             static_cast<std::uint64_t>(k), r});
    xs[r] = sample_coupling(sys, rng).X[k - 1];
  });

  MarginalCheck out;
  out.k = k;
  out.reps = reps;
  const Distribution& mu = sys.mu();
  if (mu.kind() == Distribution::Kind::discrete) {
    out.discrete = true;
    std::map<double, double> mass;
    for (const auto& a : mu.atoms()) mass[a.value] += a.mass;
    std::map<double, int> count;
    int stray = 0;
    for (double x : xs) {
      if (mass.count(x)) {
        ++count[x];
      } else {
        ++stray;
      }
    }
    double tv = static_cast<double>(stray) / reps;
    for (const auto& [v, m] : mass) tv += std::abs(static_cast<double>(count[v]) / reps - m);
    out.distance = tv / 2.0;
    return out;
  }
  std::sort(xs.begin(), xs.end());
  const MonotoneCurve& s = mu.survival();
  double d = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double f = 1.0 - eval(s, xs[r]).lo;
    d = std::max({d, f - static_cast<double>(r) / reps, static_cast<double>(r + 1) / reps - f});
  }
  out.distance = d;
  return out;
}

SlotMeans slot_means(const SlotSystem& sys, int reps, std::uint64_t seed, unsigned workers) {
  if (reps < 2) throw ArgumentError("slot means need reps >= 2");
  const int n = sys.n();
  std::vector<double> mw(reps), mwp(reps);
  std::vector<char> bad(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    Rng rng = make_stream(seed, "slot_means", {static_cast<std::uint64_t>(n), r});
    bool ok = true;
    double a = 0.0;
    double b = 0.0;
    for (int i = 1; i <= n; ++i) a += draw_slot(sys, i, false, rng, ok);
    for (int i = 1; i <= n; ++i) b += draw_slot(sys, i, true, rng, ok);
    mw[r] = a / n;
    mwp[r] = b / n;
    bad[r] = ok ? 0 : 1;
  });

  SlotMeans out;
  out.reps = reps;
  out.exact_W = hardy_value(sys.mu(), sys.p());
  out.exact_W_prime = out.exact_W - delta(sys.mu(), sys.p());
  auto stats = [reps](const std::vector<double>& v, double& mean, double& var) {
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / reps;
    double q = 0.0;
    for (double x : v) q += (x - mean) * (x - mean);
    var = q / (reps - 1);
  };
  stats(mw, out.mc_W, out.var_W);
  stats(mwp, out.mc_W_prime, out.var_W_prime);
  out.se_W = std::sqrt(out.var_W / reps);
  out.se_W_prime = std::sqrt(out.var_W_prime / reps);
  for (char c : bad) out.slot_violations += c;
  return out;
}

SimulationResult simulate_profile(const Distribution& mu, const SimulationConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ArgumentError("p must lie in (0, 1]");
  if (cfg.reps < 1) throw ArgumentError("reps must be positive");
  if (cfg.ns.empty()) throw ArgumentError("need at least one n");
  for (int n : cfg.ns) {
    if (n < 1) throw ArgumentError("n must be positive");
  }
  for (double t : cfg.thresholds) {
    if (!std::isfinite(t)) throw ArgumentError("thresholds must be finite");
  }
  if (!(cfg.margin >= 0.0)) throw ArgumentError("margin must be nonnegative");

  SimulationResult res;
  res.distribution = mu.to_json();
  res.p = cfg.p;
  res.ns = cfg.ns;
  res.reps = cfg.reps;
  res.seed = cfg.seed;
  res.margin = cfg.margin;
  if (cfg.p == 1.0) {
    res.a = res.b = expectation(mu);
  } else {
    res.b = hardy_value(mu, cfg.p);
    res.a = res.b - delta(mu, cfg.p);
  }
  const MonotoneCurve limit = limiting_survival(mu, cfg.p);

  for (int n : cfg.ns) {
    std::vector<double> ys(cfg.reps);
    std::vector<char> bad(cfg.reps, 0);
    std::optional<SlotSystem> sys;
    if (cfg.p < 1.0) sys.emplace(mu, cfg.p, n);
    parallel_for(cfg.reps, cfg.workers, [&](std::size_t r) {
      Rng rng = make_stream(cfg.seed, "worstcase", {static_cast<std::uint64_t>(n), r});
      if (sys) {
        bool ok = true;
        ys[r] = sample_average(*sys, rng, &ok);
        bad[r] = ok ? 0 : 1;
      } else {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += sample(mu, rng);
        ys[r] = s / n;
      }
    });
    for (char c : bad) res.slot_violations += c;
    std::sort(ys.begin(), ys.end());
    for (double t : cfg.thresholds) {
      ProfileRow row;
      row.n = n;
      row.t = t;
      const auto it = std::lower_bound(ys.begin(), ys.end(), t);
      const double e = static_cast<double>(ys.end() - it) / cfg.reps;
      row.empirical = e;
      row.half_width = 3.0 * std::sqrt(e * (1.0 - e) / cfg.reps);
      row.limit_value = eval(limit, t).lo;
      row.near_jump = std::abs(t - res.a) <= cfg.margin || std::abs(t - res.b) <= cfg.margin;
      res.rows.push_back(row);
    }
  }
  return res;
}

std::string SimulationResult::to_csv() const {
  std::ostringstream os;
  os << "n,t,empirical_survival,half_width,limit_value,flag\n";
  for (const auto& r : rows) {
    os << r.n << ',' << fmt17(r.t) << ',' << fmt17(r.empirical) << ',' << fmt17(r.half_width)
       << ',' << fmt17(r.limit_value) << ',' << (r.near_jump ? "near_jump" : "ok") << '\n';
  }
  return os.str();
}

Json SimulationResult::summary() const {
  return {{"command", "worstcase"},
          {"distribution", distribution},
          {"p", p},
          {"ns", ns},
          {"reps", reps},
          {"seed", seed},
          {"a", a},
          {"b", b},
          {"margin", margin},
          {"slot_violations", slot_violations},
          {"rows", rows.size()}};
}

}  // namespace sharpsum
