#pragma once

#include <charconv>
#include <string>

namespace wso {

// Shortest round-trip decimal rendering; keeps text output deterministic.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace wso
