#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace hypercolor {

// printf-based formatting; the library never changes the C locale, so the
// decimal separator is always '.'.
inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Shortest of %.{1..17}g that reads back to the same double.
inline std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int p = 1; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace hypercolor
