#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "doctest.h"
#include "sharpsum/coupling_oracle.hpp"
#include "sharpsum/sum_bound.hpp"

using namespace sharpsum;

namespace {

// Max flow from the atoms of X to the atoms of Y along pairs with x + y >= t.
// Any partial coupling extends to a full one, so this is the worst-case tail.
double max_flow_oracle(const std::vector<Atom>& a, const std::vector<Atom>& b, double t) {
  const int m = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  const int src = m + k, snk = m + k + 1, N = m + k + 2;
  std::vector<std::vector<double>> cap(N, std::vector<double>(N, 0.0));
  for (int i = 0; i < m; ++i) cap[src][i] = a[i].mass;
  for (int j = 0; j < k; ++j) cap[m + j][snk] = b[j].mass;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) {
      if (a[i].value + b[j].value >= t) cap[i][m + j] = 2.0;
    }
  }
  double flow = 0.0;
  while (true) {
    std::vector<int> prev(N, -1);
    prev[src] = src;
    std::queue<int> q;
    q.push(src);
    while (!q.empty() && prev[snk] < 0) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < N; ++v) {
        if (prev[v] < 0 && cap[u][v] > 1e-15) {
          prev[v] = u;
          q.push(v);
        }
      }
    }
    if (prev[snk] < 0) break;
    double f = 1e300;
    for (int v = snk; v != src; v = prev[v]) f = std::min(f, cap[prev[v]][v]);
    for (int v = snk; v != src; v = prev[v]) {
      cap[prev[v]][v] -= f;
      cap[v][prev[v]] += f;
    }
    flow += f;
  }
  return flow;
}

Distribution random_discrete(Rng& rng, int atoms) {
  std::vector<Atom> out;
  double x = std::floor(uniform01(rng) * 8.0) / 4.0;
  for (int i = 0; i < atoms; ++i) {
    out.push_back({x, 0.05 + uniform01(rng)});
    x += 0.25 + std::floor(uniform01(rng) * 8.0) / 4.0;
  }
  double total = 0.0;
  for (auto& a : out) total += a.mass;
  for (auto& a : out) a.mass /= total;
  return Distribution::discrete(out);
}

}  // namespace

TEST_CASE("oracle: small cases") {
  const auto d = Distribution::dirac(1.5);
  CHECK(max_tail_two({d, d, 3.0}).value == 1);
  CHECK(max_tail_two({d, d, 2.0}).value == 1);
  CHECK(max_tail_two({d, d, 3.5}).value == 0);
  const auto b = Distribution::bernoulli(0.5);
  const auto two = max_tail_two({b, b, 2.0});
  CHECK(two.value == Rational(1, 2));
  CHECK(two.coupling[1][1] == Rational(1, 2));
  CHECK(max_tail_two({b, b, 1.0}).value == 1);
}

TEST_CASE("oracle: basis counts") {
  const auto a = Distribution::discrete({{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}});
  const auto r = max_tail_two({a, a, 4.0});
  CHECK(r.bases_checked == 4096);
  CHECK(r.value == Rational(3, 4));
  CHECK(max_tail_two({a, a, 3.0}).value == 1);
}

TEST_CASE("oracle: capability and feasibility") {
  std::vector<Atom> six;
  for (int i = 0; i < 6; ++i) six.push_back({static_cast<double>(i), 1.0 / 6.0});
  const auto big = Distribution::discrete(six);
  CHECK_THROWS_AS(max_tail_two({big, Distribution::bernoulli(), 1.0}), CapabilityError);
  CHECK_THROWS_AS(max_tail_two({Distribution::exponential(1.0), Distribution::bernoulli(), 1.0}),
                  CapabilityError);
}

TEST_CASE("oracle agrees with max flow and stays under the bound") {
  Rng rng = make_stream(7, "oracle-unit");
  for (int trial = 0; trial < 40; ++trial) {
    const int ma = 1 + static_cast<int>(uniform01(rng) * 5);
    const int mb = 1 + static_cast<int>(uniform01(rng) * 5);
    const auto a = random_discrete(rng, ma);
    const auto b = random_discrete(rng, mb);
    const auto bound = theorem1_bound({a, b});
    for (int s = 0; s < 6; ++s) {
      const double t = std::floor(uniform01(rng) * 44.0) / 4.0 - 0.5;
      const TransportInstance inst{a, b, t};
      const auto r = max_tail_two(inst);
      CHECK(coupling_feasible(r, inst));
      CHECK(r.value_double == doctest::Approx(max_flow_oracle(a.atoms(), b.atoms(), t)).epsilon(1e-12));
      INFO(a.to_json().dump(), " ", b.to_json().dump(), " t=", t, " ", bound.bound.to_json().dump());
      CHECK(r.value_double <= eval(bound.bound, t).hi + 1e-9);
    }
  }
}

TEST_CASE("oracle is independent of worker count") {
  const auto a = Distribution::discrete({{0, 0.1}, {1, 0.2}, {2.5, 0.3}, {4, 0.15}, {5, 0.25}});
  const auto b = Distribution::discrete({{-1, 0.3}, {0.5, 0.3}, {2, 0.2}, {3, 0.1}, {6, 0.1}});
  const auto r1 = max_tail_two({a, b, 4.0}, 1);
  const auto r4 = max_tail_two({a, b, 4.0}, 4);
  CHECK(r1.value == r4.value);
  CHECK(r1.coupling == r4.coupling);
  CHECK(r1.bases_checked == 390625);
}

TEST_CASE("probe") {
  CHECK(random_coupling_probe(Distribution::dirac(1.25), 3, 1.25, 4, 1).max_survival == 1.0);
  const auto b = Distribution::bernoulli(0.5);
  // Average threshold 1/2 is the sum threshold 1 for n = 2.
  const auto r = random_coupling_probe(b, 2, 0.5, 8, 1);
  CHECK(r.max_survival == 1.0);
  CHECK(r.best_trial == 1);
  const auto e = Distribution::exponential(1.0);
  const auto bound = iid_bound(e);
  for (double t : {1.2, 1.6, 2.0}) {
    const auto pr = random_coupling_probe(e, 4, t, 32, 5, 2000, 2);
    CHECK(pr.max_survival <= eval(bound.bound, t).hi + 3.0 * pr.sigma);
    CHECK(pr.max_survival == random_coupling_probe(e, 4, t, 32, 5, 2000, 1).max_survival);
  }
}
