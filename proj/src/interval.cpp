#include "sharpsum/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sharpsum {

std::string to_string(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << (iv.lo_open ? "(" : "[") << iv.lo << ", " << iv.hi << (iv.hi_open ? ")" : "]");
  return os.str();
}

bool interval_leq(const Interval& a, const Interval& b, double tol) {
  auto leq = [tol](double u, double v) {
    if (u <= v) return true;
    if (!std::isfinite(u) || !std::isfinite(v)) return false;
    return u - v <= tol * std::max({1.0, std::abs(u), std::abs(v)});
  };
  return leq(a.lo, b.lo) && leq(a.hi, b.hi);
}

}  // namespace sharpsum
