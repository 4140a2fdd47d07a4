#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace beamhop {

// Shortest form that still round-trips a double.
inline std::string fmt_double(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

} // namespace beamhop
