#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace seizureml {

/// Shortest decimal form that parses back to the same double (to_chars).
inline std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Fraction rendered as a percentage with two decimals, e.g. 0.9929 -> "99.29".
inline std::string percent2(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

/// Fixed four-decimal form, used for AUC columns.
inline std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace seizureml
