#include "sharpsum/coupling_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace sharpsum {

namespace {

struct Edge {
  int i;
  int j;
};

// Spanning trees of K_{m,k} as lists of edge indices (edge e = i*k + j).
void enumerate_trees(int m, int k, std::vector<std::vector<int>>& out) {
  const int nodes = m + k;
  const int need = nodes - 1;
  const int edges = m * k;
  std::vector<int> chosen;
  std::function<void(int, std::array<int, 2 * kMaxOracleAtoms>)> rec =
      [&](int e, std::array<int, 2 * kMaxOracleAtoms> parent) {
        if (static_cast<int>(chosen.size()) == need) {
          out.push_back(chosen);
          return;
        }
        if (edges - e < need - static_cast<int>(chosen.size())) return;
        auto find = [&](int x) {
          while (parent[x] != x) x = parent[x];
          return x;
        };
        const int a = find(e / k);
        const int b = find(m + e % k);
        if (a != b) {
          auto next = parent;
          next[a] = b;
          chosen.push_back(e);
          rec(e + 1, next);
          chosen.pop_back();
        }
        rec(e + 1, parent);
      };
  std::array<int, 2 * kMaxOracleAtoms> parent{};
  std::iota(parent.begin(), parent.begin() + nodes, 0);
  rec(0, parent);
}

// Unique flow on a spanning tree with the given supplies; false if negative.
bool solve_tree(const std::vector<int>& tree, int m, int k, const std::vector<Rational>& ra,
                const std::vector<Rational>& rb, std::vector<Rational>& flow) {
  const int nodes = m + k;
  std::vector<Rational> rest(nodes);
  for (int i = 0; i < m; ++i) rest[i] = ra[i];
  for (int j = 0; j < k; ++j) rest[m + j] = rb[j];
  std::vector<int> degree(nodes, 0);
  for (int e : tree) {
    ++degree[e / k];
    ++degree[m + e % k];
  }
  std::vector<char> used(tree.size(), 0);
  flow.assign(tree.size(), Rational(0));
  for (std::size_t round = 0; round < tree.size(); ++round) {
    // Peel a leaf: its single remaining edge carries its remaining supply.
    bool peeled = false;
    for (std::size_t idx = 0; idx < tree.size() && !peeled; ++idx) {
      if (used[idx]) continue;
      const int a = tree[idx] / k;
      const int b = m + tree[idx] % k;
      int leaf = -1;
      if (degree[a] == 1) {
        leaf = a;
      } else if (degree[b] == 1) {
        leaf = b;
      }
      if (leaf < 0) continue;
      const int other = leaf == a ? b : a;
      const Rational f = rest[leaf];
      if (f < 0) return false;
      flow[idx] = f;
      rest[leaf] = 0;
      rest[other] -= f;
      --degree[a];
      --degree[b];
      used[idx] = 1;
      peeled = true;
    }
    if (!peeled) return false;
  }
  for (const auto& r : rest) {
    if (r != 0) return false;
  }
  return true;
}

std::vector<Rational> normalized_masses(const Distribution& mu) {
  std::vector<Rational> out;
  Rational total = 0;
  for (const auto& a : mu.atoms()) {
    out.emplace_back(a.mass);
    total += out.back();
  }
  for (auto& r : out) r /= total;
  return out;
}

void check_instance(const TransportInstance& inst) {
  for (const Distribution* d : {&inst.marginal_a, &inst.marginal_b}) {
    if (d->kind() != Distribution::Kind::discrete) {
      throw CapabilityError("transport oracle needs discrete marginals");
    }
    if (d->atoms().size() > kMaxOracleAtoms) {
      throw CapabilityError("transport oracle supports at most 5 atoms per marginal");
    }
  }
  if (!std::isfinite(inst.t)) throw ArgumentError("threshold must be finite");
}

}  // namespace

OracleResult max_tail_two(const TransportInstance& inst, unsigned workers) {
  check_instance(inst);
  const auto& A = inst.marginal_a.atoms();
  const auto& B = inst.marginal_b.atoms();
  const int m = static_cast<int>(A.size());
  const int k = static_cast<int>(B.size());
  const auto ra = normalized_masses(inst.marginal_a);
  const auto rb = normalized_masses(inst.marginal_b);

  // Indicator of x_i + y_j >= t, decided exactly.
  const Rational t(inst.t);
  std::vector<char> hit(m * k);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) hit[i * k + j] = Rational(A[i].value) + Rational(B[j].value) >= t;
  }

  std::vector<std::vector<int>> trees;
  enumerate_trees(m, k, trees);

  std::vector<Rational> value(trees.size());
  std::vector<char> feasible(trees.size(), 0);
  parallel_for(trees.size(), workers, [&](std::size_t idx) {
    std::vector<Rational> flow;
    if (!solve_tree(trees[idx], m, k, ra, rb, flow)) return;
    feasible[idx] = 1;
    Rational v = 0;
    for (std::size_t e = 0; e < flow.size(); ++e) {
      if (hit[trees[idx][e]]) v += flow[e];
    }
    value[idx] = v;
  });

  OracleResult out;
  out.bases_checked = trees.size();
  std::size_t best = trees.size();
  for (std::size_t idx = 0; idx < trees.size(); ++idx) {
    if (!feasible[idx]) continue;
    ++out.feasible_bases;
    if (best == trees.size() || value[idx] > value[best]) best = idx;
  }
  for (const auto& a : A) out.xs.push_back(a.value);
  for (const auto& b : B) out.ys.push_back(b.value);
  out.coupling.assign(m, std::vector<Rational>(k, Rational(0)));
  if (best == trees.size()) throw std::logic_error("transportation polytope has no vertex");
  std::vector<Rational> flow;
  solve_tree(trees[best], m, k, ra, rb, flow);
  for (std::size_t e = 0; e < flow.size(); ++e) {
    const int c = trees[best][e];
    out.coupling[c / k][c % k] = flow[e];
  }
  out.value = value[best];
  out.value_double = static_cast<double>(out.value);
  return out;
}

bool coupling_feasible(const OracleResult& r, const TransportInstance& inst) {
  const auto ra = normalized_masses(inst.marginal_a);
  const auto rb = normalized_masses(inst.marginal_b);
  if (r.coupling.size() != ra.size()) return false;
  std::vector<Rational> col(rb.size(), Rational(0));
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (r.coupling[i].size() != rb.size()) return false;
    Rational row = 0;
    for (std::size_t j = 0; j < rb.size(); ++j) {
      if (r.coupling[i][j] < 0) return false;
      row += r.coupling[i][j];
      col[j] += r.coupling[i][j];
    }
    if (row != ra[i]) return false;
  }
  return col == rb;
}

ProbeResult random_coupling_probe(const Distribution& mu, int n, double t, std::size_t trials,
                                  std::uint64_t seed, std::size_t grid, unsigned workers) {
  if (n < 1) throw ArgumentError("probe needs n >= 1");
  if (trials < 1) throw ArgumentError("probe needs at least one trial");
  if (grid < 2) throw ArgumentError("probe grid too small");
  std::vector<double> v(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    v[g] = tail_quantile(mu, (static_cast<double>(g) + 0.5) / static_cast<double>(grid))->lo;
  }

  std::vector<double> surv(trials);
  parallel_for(trials, workers, [&](std::size_t trial) {
    Rng rng = make_stream(seed, "probe", {static_cast<std::uint64_t>(n), trial});
    std::vector<double> sum(grid, 0.0);
    std::vector<std::size_t> perm(grid);
    for (int c = 0; c < n; ++c) {
      std::iota(perm.begin(), perm.end(), 0);
      if (trial == 1 && c % 2 == 1) {
        std::reverse(perm.begin(), perm.end());
      } else if (trial >= 2 && c > 0) {
        // Fisher-Yates with the stream's own uniforms.
        for (std::size_t g = grid - 1; g > 0; --g) {
          const auto r = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(g + 1));
          std::swap(perm[g], perm[std::min(r, g)]);
        }
      }
      for (std::size_t g = 0; g < grid; ++g) sum[g] += v[perm[g]];
    }
    std::size_t count = 0;
    for (double s : sum) count += s / n >= t;
    surv[trial] = static_cast<double>(count) / static_cast<double>(grid);
  });

  ProbeResult out;
  out.grid = grid;
  for (std::size_t i = 0; i < trials; ++i) {
    if (surv[i] > out.max_survival || i == 0) {
      out.max_survival = surv[i];
      out.best_trial = i;
    }
  }
  out.sigma = std::sqrt(out.max_survival * (1.0 - out.max_survival) / static_cast<double>(grid));
  return out;
}

}  // namespace sharpsum
