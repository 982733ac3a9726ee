#include "sharpsum/monotone_curve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace sharpsum {

namespace {

bool finite_point(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Left/right ends that make a segment a tail.
bool is_left_tail(const Segment& s) { return s.open_a || !finite_point(s.a); }
bool is_right_tail(const Segment& s) { return s.open_b || !finite_point(s.b); }

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Direction {
  double dx;
  double dy;
};

std::optional<Direction> straight_direction(const Segment& s) {
  if (s.shape) return std::nullopt;
  if (finite_point(s.a) && finite_point(s.b)) return Direction{s.b.x - s.a.x, s.b.y - s.a.y};
  const Point& far = finite_point(s.a) ? s.b : s.a;
  if (std::isinf(far.x) && std::isinf(far.y)) return Direction{1.0, s.slope};
  if (std::isinf(far.x)) return Direction{1.0, 0.0};
  return Direction{0.0, -1.0};
}

bool mergeable(const Segment& p, const Segment& s) {
  if (is_left_tail(p) && is_right_tail(s)) return false;
  if (p.shape || s.shape) return p.shape && p.shape == s.shape;
  const auto d1 = straight_direction(p);
  const auto d2 = straight_direction(s);
  const double cross = d1->dx * d2->dy - d1->dy * d2->dx;
  const double dot = d1->dx * d2->dx + d1->dy * d2->dy;
  return cross == 0.0 && dot > 0.0;
}

double limit_value(const ShapePtr& shape, double x) {
  const double v = shape->value(x);
  if (!std::isnan(v)) return v;
  if (x == kInf) return shape->value(1e300);
  if (x == -kInf) return shape->value(-1e300);
  return shape->value(x + std::max(1e-300, std::abs(x) * 1e-15));
}

Tail tail_from_segment(const Segment& s, bool left) {
  if (s.shape) return Tail::curved(s.shape, left ? s.a.x : s.b.x);
  if (s.a.x == s.b.x) return Tail::vertical();
  const Point& far = left ? s.a : s.b;
  if (std::isinf(far.x) && std::isfinite(far.y)) return Tail::horizontal();
  if (std::isinf(far.x) && std::isinf(far.y)) return Tail::ray(s.slope);
  // A straight piece ending at an open finite point is not representable as a
  // tail; keep it as a curved affine piece.
  const double slope = s.straight_slope();
  const Point& anchor = left ? s.b : s.a;
  return Tail::curved(std::make_shared<AffineShape>(anchor.x, anchor.y, slope), far.x);
}

struct CanonicalParts {
  std::vector<Point> vertices;
  std::vector<ShapePtr> edges;
  Tail left;
  Tail right;
};

CanonicalParts canonicalize(std::vector<Segment> segs) {
  std::vector<Segment> out;
  out.reserve(segs.size());
  for (auto s : segs) {
    if (std::isnan(s.a.x) || std::isnan(s.a.y) || std::isnan(s.b.x) || std::isnan(s.b.y)) {
      throw ArgumentError("curve segment has NaN coordinates");
    }
    if (s.b.x < s.a.x) {
      if (!nearly_equal(s.a.x, s.b.x)) throw ArgumentError("curve x-coordinates must be nondecreasing");
      s.b.x = s.a.x;
    }
    if (s.b.y > s.a.y) {
      if (!nearly_equal(s.a.y, s.b.y)) throw ArgumentError("curve y-coordinates must be nonincreasing");
      s.b.y = s.a.y;
    }
    if (!s.shape && finite_point(s.a) && s.a == s.b) continue;
    if (!out.empty()) {
      Segment& p = out.back();
      if (p.b != s.a) {
        if (!(nearly_equal(p.b.x, s.a.x) && nearly_equal(p.b.y, s.a.y))) {
          std::ostringstream msg;
          msg << "curve pieces are not connected at (" << p.b.x << ", " << p.b.y << ") / ("
              << s.a.x << ", " << s.a.y << ")";
          throw ArgumentError(msg.str());
        }
        s.a = p.b;
        if (!s.shape && finite_point(s.a) && s.a == s.b) continue;
      }
      if (mergeable(p, s)) {
        const double slope = finite_point(s.b) ? p.slope : s.slope;
        p.b = s.b;
        p.open_b = s.open_b;
        if (!p.shape) p.slope = slope;
        continue;
      }
    }
    out.push_back(s);
  }
  if (out.empty()) throw ArgumentError("curve has no pieces");

  CanonicalParts parts;
  if (out.size() == 1 && is_left_tail(out.front()) && is_right_tail(out.front())) {
    // A full vertical or horizontal line; pin the vertex at a canonical spot.
    const Segment& s = out.front();
    if (!s.shape && s.a.x == s.b.x) {
      parts.vertices.push_back({s.a.x, 0.0});
      parts.left = parts.right = Tail::vertical();
      return parts;
    }
    if (!s.shape && s.a.y == s.b.y && std::isinf(s.a.x) && std::isinf(s.b.x)) {
      parts.vertices.push_back({0.0, s.a.y});
      parts.left = parts.right = Tail::horizontal();
      return parts;
    }
    throw ArgumentError("curve needs at least one finite vertex");
  }
  std::size_t first = 0;
  std::size_t last = out.size();
  if (is_left_tail(out.front())) {
    parts.left = tail_from_segment(out.front(), true);
    first = 1;
  }
  if (is_right_tail(out.back())) {
    if (out.size() == 1 && first == 1) {
      throw ArgumentError("curve needs at least one finite vertex");
    }
    parts.right = tail_from_segment(out.back(), false);
    last = out.size() - 1;
  }
  if (first == last) {
    Point v = first == 1 ? out.front().b : out.back().a;
    if (parts.left.kind == Tail::Kind::vertical && parts.right.kind == Tail::Kind::vertical) v.y = 0.0;
    if (parts.left.kind == Tail::Kind::horizontal && parts.right.kind == Tail::Kind::horizontal) v.x = 0.0;
    parts.vertices.push_back(v);
  } else {
    parts.vertices.push_back(out[first].a);
    for (std::size_t i = first; i < last; ++i) {
      parts.vertices.push_back(out[i].b);
      parts.edges.push_back(out[i].shape);
    }
  }
  return parts;
}

Json tail_to_json(const Tail& t) {
  switch (t.kind) {
    case Tail::Kind::none:
      return {{"kind", "none"}};
    case Tail::Kind::horizontal:
      return {{"kind", "horizontal"}};
    case Tail::Kind::vertical:
      return {{"kind", "vertical"}};
    case Tail::Kind::ray:
      return {{"kind", "ray"}, {"slope", t.slope}};
    case Tail::Kind::curved:
      return {{"kind", "curved"}, {"limit", real_to_json(t.limit)},
              {"exact_form", t.shape->to_json()}};
  }
  return {};
}

Tail tail_from_json(const Json& j) {
  const std::string kind = j.at("kind");
  if (kind == "none") return {};
  if (kind == "horizontal") return Tail::horizontal();
  if (kind == "vertical") return Tail::vertical();
  if (kind == "ray") return Tail::ray(j.at("slope").get<double>());
  if (kind == "curved") {
    return Tail::curved(shape_from_json(j.at("exact_form")), real_from_json(j.at("limit")));
  }
  throw ArgumentError("unknown tail kind: " + kind);
}

bool tails_equal(const Tail& a, const Tail& b) {
  return a.kind == b.kind && a.slope == b.slope &&
         (a.kind != Tail::Kind::curved || (a.limit == b.limit && shapes_equal(a.shape, b.shape)));
}

Interval domain_intersection(const Interval& a, const Interval& b) {
  Interval d = a;
  if (b.lo > d.lo || (b.lo == d.lo && b.lo_open)) {
    d.lo = b.lo;
    d.lo_open = b.lo_open;
  }
  if (b.hi < d.hi || (b.hi == d.hi && b.hi_open)) {
    d.hi = b.hi;
    d.hi_open = b.hi_open;
  }
  return d;
}

bool domain_empty(const Interval& d) {
  return d.lo > d.hi || (d.lo == d.hi && (d.lo_open || d.hi_open));
}

// The non-vertical piece of c running through the open neighbourhood of probe,
// as a summable shape.
std::pair<ShapePtr, bool> piece_function(const MonotoneCurve& c, double probe) {
  for (const auto& s : c.segments()) {
    if (s.vertical() || !(s.a.x < probe && probe < s.b.x)) continue;
    if (s.shape) return {s.shape, false};
    const double slope = s.straight_slope();
    if (std::isfinite(s.a.x) && std::isfinite(s.a.y)) {
      return {std::make_shared<AffineShape>(s.a.x, s.a.y, slope), true};
    }
    return {std::make_shared<AffineShape>(s.b.x, s.b.y, slope), true};
  }
  throw DomainError("no curve piece around probe point", c.domain());
}

double probe_between(double lo, double hi) {
  if (std::isfinite(lo) && std::isfinite(hi)) return lo + (hi - lo) / 2.0;
  if (std::isfinite(lo)) return lo + 1.0;
  if (std::isfinite(hi)) return hi - 1.0;
  return 0.0;
}

Segment map_segment(const Segment& s, double ax, double bx, double ay, double by) {
  Segment t = s;
  t.a = {ax * s.a.x + bx, ay * s.a.y + by};
  t.b = {ax * s.b.x + bx, ay * s.b.y + by};
  if (s.shape) t.shape = transform_shape(s.shape, ax, bx, ay, by);
  t.slope = s.slope * ay / ax;
  return t;
}

// x where the piece s crosses level y (a.y >= y >= b.y).
double crossing_x(const Segment& s, double y) {
  if (s.a.x == s.b.x && !s.shape) return s.a.x;
  if (s.b.y == y && std::isfinite(s.b.x)) return s.b.x;
  if (s.a.y == y && std::isfinite(s.a.x)) return s.a.x;
  if (s.shape) return std::clamp(s.shape->inverse(y, s.a.x, s.b.x), s.a.x, s.b.x);
  if (finite_point(s.a) && finite_point(s.b)) {
    const double t = (y - s.a.y) / (s.b.y - s.a.y);
    return std::clamp(s.a.x + t * (s.b.x - s.a.x), s.a.x, s.b.x);
  }
  if (finite_point(s.b)) return s.b.x + (y - s.b.y) / s.slope;
  return s.a.x + (y - s.a.y) / s.slope;
}

std::vector<Segment> clip_above(const std::vector<Segment>& segs, double hi) {
  if (segs.front().a.y <= hi) return segs;
  std::vector<Segment> out;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& s = segs[k];
    if (s.b.y > hi) continue;
    const double x = crossing_x(s, hi);
    out.push_back(Segment{{-kInf, hi}, {x, hi}});
    Segment rest = s;
    rest.a = {x, hi};
    rest.open_a = false;
    out.push_back(rest);
    out.insert(out.end(), segs.begin() + static_cast<std::ptrdiff_t>(k) + 1, segs.end());
    return out;
  }
  // Never below the level: the clipped operator is constant.
  const Point anchor = {segs.back().b.x, hi};
  const double x = std::isfinite(anchor.x) ? anchor.x : segs.front().b.x;
  return {Segment{{-kInf, hi}, {x, hi}}, Segment{{x, hi}, {kInf, hi}}};
}

std::vector<Segment> clip_below(const std::vector<Segment>& segs, double lo) {
  if (segs.back().b.y >= lo) return segs;
  std::vector<Segment> out;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& s = segs[k];
    if (s.b.y >= lo) {
      out.push_back(s);
      continue;
    }
    const double x = crossing_x(s, lo);
    Segment head = s;
    head.b = {x, lo};
    head.open_b = false;
    out.push_back(head);
    out.push_back(Segment{{x, lo}, {kInf, lo}});
    return out;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool Segment::covers(double x) const {
  if (vertical()) return x == a.x;
  return (x > a.x || (x == a.x && !open_a)) && (x < b.x || (x == b.x && !open_b));
}

double Segment::value_at(double x) const {
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  if (shape) return shape->value(x);
  if (a.y == b.y) return a.y;
  if (finite_point(a) && finite_point(b)) {
    const double t = (x - a.x) / (b.x - a.x);
    return a.y + t * (b.y - a.y);
  }
  if (finite_point(b)) return b.y + slope * (x - b.x);
  return a.y + slope * (x - a.x);
}

double Segment::straight_slope() const {
  if (a.y == b.y) return 0.0;
  if (finite_point(a) && finite_point(b)) return (b.y - a.y) / (b.x - a.x);
  return slope;
}

MonotoneCurve::MonotoneCurve(std::vector<Point> vertices, std::vector<ShapePtr> edges,
                             Tail left, Tail right)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), left_(std::move(left)),
      right_(std::move(right)) {
  if (vertices_.empty()) throw ArgumentError("curve needs at least one vertex");
  for (const auto& v : vertices_) {
    if (!finite_point(v)) throw ArgumentError("curve vertices must be finite");
  }
  if (edges_.empty()) edges_.resize(vertices_.size() - 1);
  if (edges_.size() + 1 != vertices_.size()) throw ArgumentError("edge count must be vertices - 1");
  if ((left_.kind == Tail::Kind::curved && !left_.shape) ||
      (right_.kind == Tail::Kind::curved && !right_.shape)) {
    throw ArgumentError("curved tail without shape");
  }
  if ((left_.kind == Tail::Kind::ray && !(left_.slope < 0.0)) ||
      (right_.kind == Tail::Kind::ray && !(right_.slope < 0.0))) {
    throw ArgumentError("ray tails need a negative slope");
  }
  build_segments();
  if (segments_.empty()) return;  // single point
  auto parts = canonicalize(segments_);
  vertices_ = std::move(parts.vertices);
  edges_ = std::move(parts.edges);
  left_ = std::move(parts.left);
  right_ = std::move(parts.right);
  build_segments();
}

MonotoneCurve MonotoneCurve::from_segments(std::vector<Segment> segments) {
  auto parts = canonicalize(std::move(segments));
  return MonotoneCurve(std::move(parts.vertices), std::move(parts.edges), std::move(parts.left),
                       std::move(parts.right));
}

void MonotoneCurve::build_segments() {
  segments_.clear();
  const Point& v0 = vertices_.front();
  const Point& vn = vertices_.back();
  switch (left_.kind) {
    case Tail::Kind::none:
      break;
    case Tail::Kind::horizontal:
      segments_.push_back(Segment{{-kInf, v0.y}, v0});
      break;
    case Tail::Kind::vertical:
      segments_.push_back(Segment{{v0.x, kInf}, v0});
      break;
    case Tail::Kind::ray:
      segments_.push_back(Segment{{-kInf, kInf}, v0, nullptr, left_.slope});
      break;
    case Tail::Kind::curved:
      segments_.push_back(
          Segment{{left_.limit, limit_value(left_.shape, left_.limit)}, v0, left_.shape, 0.0, true});
      break;
  }
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    segments_.push_back(Segment{vertices_[i], vertices_[i + 1], edges_[i]});
  }
  switch (right_.kind) {
    case Tail::Kind::none:
      break;
    case Tail::Kind::horizontal:
      segments_.push_back(Segment{vn, {kInf, vn.y}});
      break;
    case Tail::Kind::vertical:
      segments_.push_back(Segment{vn, {vn.x, -kInf}});
      break;
    case Tail::Kind::ray:
      segments_.push_back(Segment{vn, {kInf, -kInf}, nullptr, right_.slope});
      break;
    case Tail::Kind::curved: {
      Segment s{vn, {right_.limit, limit_value(right_.shape, right_.limit)}, right_.shape};
      s.open_b = true;
      segments_.push_back(s);
      break;
    }
  }
}

Interval MonotoneCurve::domain() const {
  Interval d;
  const Point& v0 = vertices_.front();
  const Point& vn = vertices_.back();
  switch (left_.kind) {
    case Tail::Kind::horizontal:
    case Tail::Kind::ray:
      d.lo = -kInf;
      d.lo_open = true;
      break;
    case Tail::Kind::curved:
      d.lo = left_.limit;
      d.lo_open = true;
      break;
    default:
      d.lo = v0.x;
  }
  switch (right_.kind) {
    case Tail::Kind::horizontal:
    case Tail::Kind::ray:
      d.hi = kInf;
      d.hi_open = true;
      break;
    case Tail::Kind::curved:
      d.hi = right_.limit;
      d.hi_open = true;
      break;
    default:
      d.hi = vn.x;
  }
  return d;
}

Interval MonotoneCurve::range() const {
  Interval r;
  const Point& v0 = vertices_.front();
  const Point& vn = vertices_.back();
  switch (left_.kind) {
    case Tail::Kind::vertical:
    case Tail::Kind::ray:
      r.hi = kInf;
      r.hi_open = true;
      break;
    case Tail::Kind::curved:
      r.hi = segments_.front().a.y;
      r.hi_open = true;
      break;
    default:
      r.hi = v0.y;
  }
  switch (right_.kind) {
    case Tail::Kind::vertical:
    case Tail::Kind::ray:
      r.lo = -kInf;
      r.lo_open = true;
      break;
    case Tail::Kind::curved:
      r.lo = segments_.back().b.y;
      r.lo_open = true;
      break;
    default:
      r.lo = vn.y;
  }
  return r;
}

bool MonotoneCurve::is_polyline() const {
  return left_.kind != Tail::Kind::curved && right_.kind != Tail::Kind::curved &&
         std::all_of(edges_.begin(), edges_.end(), [](const ShapePtr& e) { return !e; });
}

Json MonotoneCurve::to_json() const {
  Json vs = Json::array();
  for (const auto& v : vertices_) vs.push_back({v.x, v.y});
  Json j = {{"vertices", vs}, {"left_tail", tail_to_json(left_)},
            {"right_tail", tail_to_json(right_)}};
  if (std::any_of(edges_.begin(), edges_.end(), [](const ShapePtr& e) { return e != nullptr; })) {
    Json es = Json::array();
    for (const auto& e : edges_) es.push_back(e ? e->to_json() : Json());
    j["edges"] = es;
  }
  return j;
}

MonotoneCurve MonotoneCurve::from_json(const Json& j) {
  std::vector<Point> vs;
  for (const auto& v : j.at("vertices")) vs.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  std::vector<ShapePtr> es;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) es.push_back(e.is_null() ? nullptr : shape_from_json(e));
  }
  return MonotoneCurve(std::move(vs), std::move(es), tail_from_json(j.at("left_tail")),
                       tail_from_json(j.at("right_tail")));
}

bool MonotoneCurve::operator==(const MonotoneCurve& other) const {
  if (vertices_ != other.vertices_ || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!shapes_equal(edges_[i], other.edges_[i])) return false;
  }
  return tails_equal(left_, other.left_) && tails_equal(right_, other.right_);
}

// ---------------------------------------------------------------------------

Interval eval(const MonotoneCurve& c, double x) {
  if (!std::isfinite(x)) {
    throw DomainError("cannot evaluate an operator at an infinite point", c.domain());
  }
  bool found = false;
  double lo = kInf;
  double hi = -kInf;
  for (const auto& s : c.segments()) {
    if (!s.covers(x)) continue;
    found = true;
    if (s.vertical()) {
      lo = std::min(lo, s.b.y);
      hi = std::max(hi, s.a.y);
    } else {
      const double y = s.value_at(x);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (c.segments().empty() && c.vertices().front().x == x) {
    found = true;
    lo = hi = c.vertices().front().y;
  }
  if (!found) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "x = " << x << " outside operator domain " << to_string(c.domain());
    throw DomainError(msg.str(), c.domain());
  }
  return {lo, hi};
}

MonotoneCurve invert(const MonotoneCurve& c) {
  if (c.segments().empty()) {
    const Point& v = c.vertices().front();
    return MonotoneCurve({{v.y, v.x}}, {}, {}, {});
  }
  std::vector<Segment> out;
  out.reserve(c.segments().size());
  for (auto it = c.segments().rbegin(); it != c.segments().rend(); ++it) {
    Segment t;
    t.a = {it->b.y, it->b.x};
    t.b = {it->a.y, it->a.x};
    t.open_a = it->open_b;
    t.open_b = it->open_a;
    if (it->shape) t.shape = it->shape->inverted();
    if (!it->shape && it->slope != 0.0) t.slope = 1.0 / it->slope;
    out.push_back(t);
  }
  return MonotoneCurve::from_segments(std::move(out));
}

bool curve_leq(const MonotoneCurve& f, const MonotoneCurve& g, double tol) {
  const Interval df = f.domain();
  const Interval dg = g.domain();
  if (!interval_leq(df, dg)) return false;
  const Interval d = domain_intersection(df, dg);
  if (domain_empty(d)) return true;

  std::vector<double> probes;
  auto add = [&](double x) {
    if (std::isfinite(x) && d.contains(x)) probes.push_back(x);
  };
  for (const auto* c : {&f, &g}) {
    for (const auto& v : c->vertices()) add(v.x);
  }
  add(d.lo);
  add(d.hi);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  const std::size_t base_count = probes.size();
  for (std::size_t i = 0; i + 1 < base_count; ++i) add(probes[i] + (probes[i + 1] - probes[i]) / 2.0);

  const double left_anchor = base_count ? probes.front() : probe_between(d.lo, d.hi);
  const double right_anchor = base_count ? probes[base_count - 1] : left_anchor;
  add(left_anchor);
  if (d.lo == -kInf) {
    for (int k = 0; k < 1020; k += (k < 64 ? 1 : 16)) add(left_anchor - std::ldexp(1.0, k));
  } else if (d.lo_open) {
    const double span = left_anchor > d.lo ? left_anchor - d.lo : 1.0;
    for (int k = 1; k < 1070; k += (k < 64 ? 1 : 16)) add(d.lo + span * std::ldexp(1.0, -k));
  }
  if (d.hi == kInf) {
    for (int k = 0; k < 1020; k += (k < 64 ? 1 : 16)) add(right_anchor + std::ldexp(1.0, k));
  } else if (d.hi_open) {
    const double span = d.hi > right_anchor ? d.hi - right_anchor : 1.0;
    for (int k = 1; k < 1070; k += (k < 64 ? 1 : 16)) add(d.hi - span * std::ldexp(1.0, -k));
  }
  for (const auto* c : {&f, &g}) {
    for (const auto& s : c->segments()) {
      if (!s.shape) continue;
      const double lo = std::max(s.a.x, d.lo);
      const double hi = std::min(s.b.x, d.hi);
      if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) continue;
      constexpr int kSamples = 32;
      for (int i = 1; i < kSamples; ++i) add(lo + (hi - lo) * i / kSamples);
    }
  }

  for (double x : probes) {
    if (!interval_leq(eval(f, x), eval(g, x), tol)) return false;
  }
  return true;
}

MonotoneCurve pointwise_sum(std::span<const MonotoneCurve> curves) {
  if (curves.empty()) throw ArgumentError("pointwise_sum needs at least one curve");
  if (curves.size() == 1) return curves.front();
  Interval d = curves.front().domain();
  for (const auto& c : curves.subspan(1)) d = domain_intersection(d, c.domain());
  if (domain_empty(d)) throw DomainError("curves have no common domain", d);

  std::vector<double> breaks;
  for (const auto& c : curves) {
    for (const auto& v : c.vertices()) {
      if (d.contains(v.x)) breaks.push_back(v.x);
    }
  }
  if (std::isfinite(d.lo) && d.contains(d.lo)) breaks.push_back(d.lo);
  if (std::isfinite(d.hi) && d.contains(d.hi)) breaks.push_back(d.hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.empty()) breaks.push_back(probe_between(d.lo, d.hi));

  std::vector<Interval> vals;
  for (double x : breaks) {
    Interval total{0.0, 0.0};
    for (const auto& c : curves) {
      const Interval iv = eval(c, x);
      total.lo += iv.lo;
      total.hi += iv.hi;
    }
    vals.push_back(total);
  }

  struct Piece {
    ShapePtr sum;
    double slope = 0.0;
  };
  auto piece_between = [&](double lo, double hi) {
    const double probe = probe_between(lo, hi);
    std::vector<ShapePtr> shapes;
    bool straight = true;
    double slope = 0.0;
    for (const auto& c : curves) {
      auto [shape, is_straight] = piece_function(c, probe);
      straight = straight && is_straight;
      if (is_straight) slope += std::static_pointer_cast<const AffineShape>(shape)->slope();
      shapes.push_back(std::move(shape));
    }
    Piece p;
    if (straight) {
      p.slope = slope;
    } else {
      p.sum = std::make_shared<SumShape>(std::move(shapes));
    }
    return p;
  };

  std::vector<Segment> out;
  if (d.lo < breaks.front()) {
    const Piece p = piece_between(d.lo, breaks.front());
    const Point b{breaks.front(), vals.front().hi};
    if (!p.sum && d.lo == -kInf) {
      out.push_back(p.slope == 0.0 ? Segment{{-kInf, b.y}, b}
                                   : Segment{{-kInf, kInf}, b, nullptr, p.slope});
    } else {
      ShapePtr shape = p.sum ? p.sum : std::make_shared<AffineShape>(b.x, b.y, p.slope);
      out.push_back(Segment{{d.lo, limit_value(shape, d.lo)}, b, shape, 0.0, true});
    }
  }
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    const double x = breaks[j];
    if (vals[j].hi != vals[j].lo) out.push_back(Segment{{x, vals[j].hi}, {x, vals[j].lo}});
    if (j + 1 < breaks.size()) {
      const Piece p = piece_between(x, breaks[j + 1]);
      out.push_back(Segment{{x, vals[j].lo}, {breaks[j + 1], vals[j + 1].hi}, p.sum});
    }
  }
  if (d.hi > breaks.back()) {
    const Piece p = piece_between(breaks.back(), d.hi);
    const Point a{breaks.back(), vals.back().lo};
    if (!p.sum && d.hi == kInf) {
      out.push_back(p.slope == 0.0 ? Segment{a, {kInf, a.y}}
                                   : Segment{a, {kInf, -kInf}, nullptr, p.slope});
    } else {
      ShapePtr shape = p.sum ? p.sum : std::make_shared<AffineShape>(a.x, a.y, p.slope);
      Segment s{a, {d.hi, limit_value(shape, d.hi)}, shape};
      s.open_b = true;
      out.push_back(s);
    }
  }
  if (out.empty()) return MonotoneCurve({{breaks.front(), vals.front().lo}}, {}, {}, {});
  return MonotoneCurve::from_segments(std::move(out));
}

MonotoneCurve scale(const MonotoneCurve& c, double factor, Axis axis) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ArgumentError("scale factor must be positive");
  const double ax = axis == Axis::x ? factor : 1.0;
  const double ay = axis == Axis::y ? factor : 1.0;
  if (c.segments().empty()) {
    const Point& v = c.vertices().front();
    return MonotoneCurve({{ax * v.x, ay * v.y}}, {}, {}, {});
  }
  std::vector<Segment> out;
  for (const auto& s : c.segments()) out.push_back(map_segment(s, ax, 0.0, ay, 0.0));
  return MonotoneCurve::from_segments(std::move(out));
}

MonotoneCurve shift(const MonotoneCurve& c, double offset, Axis axis) {
  if (!std::isfinite(offset)) throw ArgumentError("shift offset must be finite");
  const double bx = axis == Axis::x ? offset : 0.0;
  const double by = axis == Axis::y ? offset : 0.0;
  if (c.segments().empty()) {
    const Point& v = c.vertices().front();
    return MonotoneCurve({{v.x + bx, v.y + by}}, {}, {}, {});
  }
  std::vector<Segment> out;
  for (const auto& s : c.segments()) out.push_back(map_segment(s, 1.0, bx, 1.0, by));
  return MonotoneCurve::from_segments(std::move(out));
}

MonotoneCurve clip_y(const MonotoneCurve& c, double lo, double hi) {
  if (lo > hi) throw ArgumentError("clip_y needs lo <= hi");
  if (c.segments().empty()) {
    const Point& v = c.vertices().front();
    return MonotoneCurve({{v.x, std::clamp(v.y, lo, hi)}}, {}, {}, {});
  }
  std::vector<Segment> segs = c.segments();
  if (hi < kInf) segs = clip_above(segs, hi);
  if (lo > -kInf) segs = clip_below(segs, lo);
  return MonotoneCurve::from_segments(std::move(segs));
}

MonotoneCurve make_incr(double delta) {
  if (!std::isfinite(delta)) throw ArgumentError("Incr threshold must be finite");
  return MonotoneCurve({{delta, 1.0}, {delta, 0.0}}, {}, Tail::horizontal(), Tail::horizontal());
}

MonotoneCurve make_id_pow(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("Id^-a needs a > 0");
  auto shape = std::make_shared<PowerShape>(a, false);
  return MonotoneCurve({{1.0, 1.0}}, {}, Tail::curved(shape, 0.0), Tail::curved(shape, kInf));
}

MonotoneCurve make_exp() {
  auto shape = std::make_shared<ExpShape>();
  return MonotoneCurve({{0.0, 1.0}}, {}, Tail::curved(shape, -kInf), Tail::curved(shape, kInf));
}

MonotoneCurve approximate_polyline(const MonotoneCurve& c, double tol, double window_lo,
                                   double window_hi) {
  if (!(tol > 0.0)) throw ArgumentError("approximation tolerance must be positive");
  if (!(window_lo < window_hi)) throw ArgumentError("approximation window is empty");
  std::vector<Segment> out;
  bool cut_left = false;
  bool cut_right = false;

  auto refine = [&](const Segment& s, double x0, double x1) {
    std::vector<Point> pts{{x0, s.value_at(x0)}};
    struct Span {
      double x0, x1;
      int depth;
    };
    std::vector<Span> stack{{x0, x1, 0}};
    std::vector<Point> emitted;
    // Depth-first, left to right: push right half first.
    while (!stack.empty()) {
      const Span sp = stack.back();
      stack.pop_back();
      const double y0 = s.value_at(sp.x0);
      const double y1 = s.value_at(sp.x1);
      double dev = 0.0;
      for (int i = 1; i < 8; ++i) {
        const double t = i / 8.0;
        const double x = sp.x0 + t * (sp.x1 - sp.x0);
        dev = std::max(dev, std::abs(s.value_at(x) - (y0 + t * (y1 - y0))));
      }
      const double mid = sp.x0 + (sp.x1 - sp.x0) / 2.0;
      if (dev > tol && sp.depth < 60 && mid > sp.x0 && mid < sp.x1) {
        stack.push_back({mid, sp.x1, sp.depth + 1});
        stack.push_back({sp.x0, mid, sp.depth + 1});
      } else {
        pts.push_back({sp.x1, y1});
      }
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(Segment{pts[i], pts[i + 1]});
  };

  for (const auto& s : c.segments()) {
    if (s.vertical()) {
      if (s.a.x < window_lo) {
        cut_left = true;
      } else if (s.a.x > window_hi) {
        cut_right = true;
      } else {
        out.push_back(s);
      }
      continue;
    }
    if (s.a.x < window_lo) cut_left = true;
    if (s.b.x > window_hi) cut_right = true;
    double lo = std::max(s.a.x, window_lo);
    double hi = std::min(s.b.x, window_hi);
    if (!(lo < hi)) continue;
    if (!s.shape) {
      Segment t = s;
      if (lo > s.a.x) t.a = {lo, s.value_at(lo)};
      if (hi < s.b.x) t.b = {hi, s.value_at(hi)};
      out.push_back(t);
      continue;
    }
    if (lo == s.a.x && s.open_a) lo = s.a.x + (hi - s.a.x) * 1e-9;
    if (hi == s.b.x && s.open_b) hi = s.b.x - (s.b.x - lo) * 1e-9;
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ArgumentError("approximation window must be finite around curved pieces");
    refine(s, lo, hi);
  }
  if (out.empty()) throw ArgumentError("approximation window misses the curve");
  if (cut_left && !is_left_tail(out.front())) {
    out.insert(out.begin(), Segment{{out.front().a.x, kInf}, out.front().a});
  }
  if (cut_right && !is_right_tail(out.back())) {
    out.push_back(Segment{out.back().b, {kInf, out.back().b.y}});
  }
  return MonotoneCurve::from_segments(std::move(out));
}

MonotoneCurve curve_from_samples(std::span<const double> ts, std::span<const double> lo,
                                 std::span<const double> hi) {
  if (ts.empty() || ts.size() != lo.size() || ts.size() != hi.size()) {
    throw ArgumentError("sample columns must be nonempty and of equal length");
  }
  std::vector<Point> vs;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    vs.push_back({ts[k], hi[k]});
    vs.push_back({ts[k], lo[k]});
  }
  std::vector<Segment> segs{Segment{{-kInf, vs.front().y}, vs.front()}};
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) segs.push_back(Segment{vs[i], vs[i + 1]});
  segs.push_back(Segment{vs.back(), {kInf, vs.back().y}});
  return MonotoneCurve::from_segments(std::move(segs));
}

}  // namespace sharpsum
