#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sharpsum/monotone_curve.hpp"

namespace testutil {

// Random polyline on a dyadic grid so sums and inversions stay exact.
// Steps in x or y may be zero, giving jumps and flats.
inline sharpsum::MonotoneCurve random_polyline(std::mt19937_64& rng, int max_vertices = 8) {
  using sharpsum::Tail;
  std::uniform_int_distribution<int> count(1, max_vertices);
  std::uniform_int_distribution<int> step(0, 4);
  std::uniform_int_distribution<int> start(-16, 16);
  std::uniform_int_distribution<int> tail_kind(0, 2);
  const int k = count(rng);
  std::vector<sharpsum::Point> vs;
  double x = start(rng) * 0.25;
  double y = start(rng) * 0.25;
  vs.push_back({x, y});
  for (int i = 1; i < k; ++i) {
    int dx = step(rng);
    int dy = step(rng);
    if (dx == 0 && dy == 0) dx = 1;
    x += dx * 0.25;
    y -= dy * 0.25;
    vs.push_back({x, y});
  }
  auto tail = [&]() {
    switch (tail_kind(rng)) {
      case 0:
        return Tail::horizontal();
      case 1:
        return Tail::vertical();
      default:
        return Tail::ray(-0.25 * (1 + step(rng)));
    }
  };
  Tail left = tail();
  Tail right = tail();
  return sharpsum::MonotoneCurve(vs, {}, left, right);
}

// Survival curve of a random discrete law on a dyadic grid.
inline sharpsum::MonotoneCurve random_staircase(std::mt19937_64& rng, int max_atoms = 6) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_int_distribution<int> gap(1, 8);
  std::uniform_int_distribution<int> weight(1, 8);
  const int k = count(rng);
  std::vector<double> xs;
  std::vector<int> ws;
  int total = 0;
  double x = -2.0;
  for (int i = 0; i < k; ++i) {
    x += gap(rng) * 0.25;
    xs.push_back(x);
    ws.push_back(weight(rng));
    total += ws.back();
  }
  std::vector<sharpsum::Point> vs;
  int remaining = total;
  for (int i = 0; i < k; ++i) {
    vs.push_back({xs[i], static_cast<double>(remaining) / total});
    remaining -= ws[i];
    vs.push_back({xs[i], static_cast<double>(remaining) / total});
  }
  return sharpsum::MonotoneCurve(vs, {}, sharpsum::Tail::horizontal(), sharpsum::Tail::horizontal());
}

// Same canonical structure, vertices equal up to rounding.
inline bool curves_close(const sharpsum::MonotoneCurve& a, const sharpsum::MonotoneCurve& b,
                         double tol = 1e-12) {
  if (a.vertices().size() != b.vertices().size()) return false;
  if (a.left_tail().kind != b.left_tail().kind || a.right_tail().kind != b.right_tail().kind) {
    return false;
  }
  auto near = [tol](double u, double v) {
    return u == v || std::abs(u - v) <= tol * std::max({1.0, std::abs(u), std::abs(v)});
  };
  if (!near(a.left_tail().slope, b.left_tail().slope) ||
      !near(a.right_tail().slope, b.right_tail().slope)) {
    return false;
  }
  for (std::size_t i = 0; i < a.vertices().size(); ++i) {
    if (!near(a.vertices()[i].x, b.vertices()[i].x) || !near(a.vertices()[i].y, b.vertices()[i].y)) {
      return false;
    }
  }
  return true;
}

}  // namespace testutil
