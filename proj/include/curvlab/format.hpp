#pragma once

#include <cstdio>
#include <string>

namespace curvlab {

/// 17 significant digits, lowercase exponent; round-trips any double.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

}  // namespace curvlab
