#include "sharpsum/hardy.hpp"

#include <cmath>

namespace sharpsum {

Json HardyProfile::to_json() const {
  Json ps = Json::array();
  for (const auto& pc : pieces) {
    Json j = {{"p0", real_to_json(pc.p0)}, {"p1", real_to_json(pc.p1)}};
    if (pc.curved) {
      j["exact_form"] = pc.curved->to_json();
    } else {
      j["a"] = pc.a;
      j["b"] = pc.b;
      j["c"] = pc.c;
    }
    ps.push_back(j);
  }
  Json out = {{"base", base.to_json()}, {"curve", curve.to_json()}, {"segments", ps}};
  out["endpoint_zero"] = endpoint_zero
                             ? Json{real_to_json(endpoint_zero->lo), real_to_json(endpoint_zero->hi)}
                             : Json();
  out["endpoint_pf"] = endpoint_pf ? Json{{"p_f", endpoint_pf->first},
                                          {"upper", real_to_json(endpoint_pf->second)}}
                                   : Json();
  return out;
}

HardyProfile hardy_transform(const MonotoneCurve& f) {
  const Interval dom = f.domain();
  if (dom.lo != 0.0 || !(dom.hi > 0.0)) {
    throw ArgumentError("Hardy transform needs dom(f) to start at 0, got " + to_string(dom));
  }
  std::vector<Segment> out;
  std::vector<HardyPiece> pieces;
  double integral = 0.0;  // of f over [0, current p]

  for (const auto& s : f.segments()) {
    if (s.vertical()) {
      if (s.a.x == 0.0) out.push_back(s);  // H(f)(0) = f(0)
      continue;
    }
    const double x0 = s.a.x;
    const double x1 = s.b.x;
    HardyPiece piece{x0, x1};
    Segment h;
    h.open_a = s.open_a;
    h.open_b = s.open_b;
    double piece_integral = 0.0;
    if (!s.shape) {
      const double slope = s.straight_slope();
      const double ya = s.a.y;
      piece.a = ya - slope * x0;
      piece.b = slope / 2.0;
      piece.c = integral - ya * x0 + slope / 2.0 * x0 * x0;
      if (std::isfinite(x1)) {
        piece_integral = (ya + s.b.y) / 2.0 * (x1 - x0);
      } else {
        piece_integral = slope < 0.0 ? -kInf : (ya == 0.0 ? 0.0 : ya * kInf);
      }
      if (piece.c != 0.0) {
        h.shape = std::make_shared<HyperbolicShape>(piece.a, piece.b, piece.c);
      } else {
        h.slope = piece.b;
      }
      h.a = {x0, x0 == 0.0 ? ya : integral / x0};
      if (!std::isfinite(x1)) {
        h.b = {kInf, slope < 0.0 ? -kInf : ya};
      } else if (slope == 0.0 && h.a.y == ya) {
        h.b = {x1, ya};  // average of a constant; avoids rounding (ya x1) / x1
      } else {
        h.b = {x1, (integral + piece_integral) / x1};
      }
    } else {
      if (x0 == 0.0) {
        const double probe = std::isfinite(x1) ? x1 : 1.0;
        if (!std::isfinite(s.shape->integral(0.0, probe))) {
          throw CapabilityError("Hardy transform diverges: f is not integrable at 0");
        }
      }
      piece.curved = std::make_shared<HardyShape>(s.shape, x0, integral);
      h.shape = piece.curved;
      if (std::isfinite(x1)) piece_integral = s.shape->integral(x0, x1);
      h.a = {x0, x0 == 0.0 ? s.a.y : integral / x0};
      if (std::isfinite(x1)) {
        h.b = {x1, (integral + piece_integral) / x1};
      } else {
        h.b = {kInf, piece.curved->value(kInf)};
      }
    }
    pieces.push_back(piece);
    out.push_back(h);
    integral += piece_integral;
  }

  HardyProfile prof{f, f, std::move(pieces), std::nullopt, std::nullopt};
  if (dom.contains(0.0)) prof.endpoint_zero = eval(f, 0.0);
  if (std::isfinite(dom.hi)) {
    if (!std::isfinite(integral)) throw CapabilityError("Hardy transform diverges");
    const double v = integral / dom.hi;
    prof.endpoint_pf = std::make_pair(dom.hi, v);
    if (!out.empty() && out.back().open_b) {
      out.back().b.y = v;
      out.back().open_b = false;
    }
    out.push_back(Segment{{dom.hi, v}, {dom.hi, -kInf}});
  }
  prof.curve = MonotoneCurve::from_segments(std::move(out));
  return prof;
}

HardyProfile hardy_of(const Distribution& mu) { return hardy_transform(mu.tail_quantile()); }

double hardy_value(const Distribution& mu, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("Hardy level must lie in (0, 1]");
  if (p == 1.0) return expectation(mu);
  return eval(hardy_of(mu).curve, p).lo;
}

double delta(const Distribution& mu, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("delta needs p in (0, 1)");
  return (hardy_value(mu, p) - expectation(mu)) / (1.0 - p);
}

MonotoneCurve limiting_survival(const Distribution& mu, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("limiting profile needs p in (0, 1]");
  if (p == 1.0) return make_incr(expectation(mu));
  const double h = hardy_value(mu, p);
  const double d = delta(mu, p);
  if (d == 0.0) return make_incr(h);
  const double a = h - d;
  return MonotoneCurve({{a, 1.0}, {a, p}, {h, p}, {h, 0.0}}, {}, Tail::horizontal(),
                       Tail::horizontal());
}

}  // namespace sharpsum
