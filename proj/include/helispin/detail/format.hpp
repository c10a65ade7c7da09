#pragma once

#include <charconv>
#include <string>

namespace helispin::detail {

// Shortest 17-significant-digit decimal form, locale-independent. Negative
// zero is normalized so identical values always serialize identically.
inline std::string format17(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

}  // namespace helispin::detail
