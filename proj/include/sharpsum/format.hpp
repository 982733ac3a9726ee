#pragma once

#include <cstdio>
#include <string>

namespace sharpsum {

// 17 significant digits; infinities as inf / -inf.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sharpsum
