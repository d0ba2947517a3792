#pragma once

#include <charconv>
#include <string>

namespace igeo {

/// Shortest decimal representation that round-trips the double exactly.
/// Locale-independent, so CSV regression files stay byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace igeo
