#pragma once

#include <charconv>
#include <string>

namespace nashforge::detail {

// Shortest round-trip decimal form; keeps text outputs byte-deterministic.
inline std::string fmt_num(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace nashforge::detail
