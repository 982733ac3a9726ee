#pragma once

// Maximally nonincreasing set-valued operators on the real line, stored as
// their graph: a connected chain of straight or curved pieces running from the
// upper-left to the lower-right of the extended plane. Vertical pieces are
// jumps, horizontal pieces are flats, so inversion is a coordinate swap.

#include <span>
#include <vector>

#include "sharpsum/interval.hpp"
#include "sharpsum/shape.hpp"

namespace sharpsum {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

// How the graph continues beyond the first (left) or last (right) vertex.
//   horizontal: constant level toward x = -inf (left) / +inf (right)
//   vertical:   constant abscissa toward y = +inf (left) / -inf (right)
//   ray:        straight line with slope < 0 toward both infinities
//   curved:     follows `shape` until the open x-limit `limit`
//   none:       the graph stops at the vertex
struct Tail {
  enum class Kind { none, horizontal, vertical, ray, curved };

  Kind kind = Kind::none;
  double slope = 0.0;
  ShapePtr shape;
  double limit = 0.0;

  static Tail horizontal() { return {Kind::horizontal}; }
  static Tail vertical() { return {Kind::vertical}; }
  static Tail ray(double slope) { return {Kind::ray, slope}; }
  static Tail curved(ShapePtr shape, double limit) {
    return {Kind::curved, 0.0, std::move(shape), limit};
  }
};

// One piece of the graph. `a` is the upper-left end and `b` the lower-right
// end; tail pieces carry an infinite coordinate or an open end.
struct Segment {
  Point a;
  Point b;
  ShapePtr shape;
  double slope = 0.0;  // straight pieces with a doubly infinite end
  bool open_a = false;
  bool open_b = false;

  bool vertical() const { return !shape && a.x == b.x; }
  bool covers(double x) const;
  // y-value of a non-vertical piece; endpoints return the stored coordinates.
  double value_at(double x) const;
  // Slope of a straight, non-vertical piece.
  double straight_slope() const;
};

class MonotoneCurve {
 public:
  // edges[i] joins vertices[i] and vertices[i+1]; a null edge is straight.
  MonotoneCurve(std::vector<Point> vertices, std::vector<ShapePtr> edges, Tail left,
                Tail right);

  // Canonicalizes (drops zero-length pieces, merges collinear straight
  // pieces) and validates monotonicity and connectedness.
  static MonotoneCurve from_segments(std::vector<Segment> segments);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<ShapePtr>& edges() const { return edges_; }
  const Tail& left_tail() const { return left_; }
  const Tail& right_tail() const { return right_; }
  const std::vector<Segment>& segments() const { return segments_; }

  Interval domain() const;
  Interval range() const;
  bool is_polyline() const;

  Json to_json() const;
  static MonotoneCurve from_json(const Json& j);

  bool operator==(const MonotoneCurve& other) const;

 private:
  void build_segments();

  std::vector<Point> vertices_;
  std::vector<ShapePtr> edges_;
  Tail left_;
  Tail right_;
  std::vector<Segment> segments_;
};

enum class Axis { x, y };

// Closed interval of y-values at abscissa x; throws DomainError outside dom(c).
Interval eval(const MonotoneCurve& c, double x);

MonotoneCurve invert(const MonotoneCurve& c);

// f <= g in the pointwise interval order, with dom(f) <= dom(g). Exact on
// straight pieces (checked at merged breakpoints and midpoints); curved pieces
// are additionally checked on dense and far-reaching probe points.
bool curve_leq(const MonotoneCurve& f, const MonotoneCurve& g, double tol = 0.0);

// Minkowski sum of values on the intersection of domains.
MonotoneCurve pointwise_sum(std::span<const MonotoneCurve> curves);

MonotoneCurve scale(const MonotoneCurve& c, double factor, Axis axis);
MonotoneCurve shift(const MonotoneCurve& c, double offset, Axis axis);

// Replaces the parts of the graph above `hi` (below `lo`) by a horizontal
// tail at that level; the domain then extends to -inf (+inf). Pass an
// infinite bound to leave that side untouched.
MonotoneCurve clip_y(const MonotoneCurve& c, double lo, double hi);

// Incr_delta: 1 before delta, [0, 1] at delta, 0 after.
MonotoneCurve make_incr(double delta);
// Id^-a: t -> t^-a on t > 0.
MonotoneCurve make_id_pow(double a);
// E_1: t -> exp(-t).
MonotoneCurve make_exp();

// Straight-only approximation of c whose curved pieces are refined until the
// chord deviates from the exact value by at most `tol` on [window_lo,
// window_hi]. Curved tails are cut at the window edge.
MonotoneCurve approximate_polyline(const MonotoneCurve& c, double tol, double window_lo,
                                   double window_hi);

// Polyline through sampled intervals (t_k, [lo_k, hi_k]) with horizontal
// tails; used to reload curves written as CSV profiles.
MonotoneCurve curve_from_samples(std::span<const double> ts, std::span<const double> lo,
                                 std::span<const double> hi);

}  // namespace sharpsum
