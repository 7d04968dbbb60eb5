#pragma once

#include <cstdio>
#include <string>

namespace pace::detail {

// Shortest-ish human readable number for error messages.
inline std::string num(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

} // namespace pace::detail
