#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace simplexmax {

using Int = std::int64_t;

// 128-bit counts: solution counts and second moments overflow 64 bits
// already at moderate dimensions.
using Wide = __int128;
using UWide = unsigned __int128;

inline std::string wide_to_string(Wide v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    UWide u = neg ? UWide(-(v + 1)) + 1 : UWide(v);
    char buf[48];
    int pos = 48;
    while (u > 0) {
        buf[--pos] = char('0' + int(u % 10));
        u /= 10;
    }
    std::string s(buf + pos, 48 - pos);
    return neg ? "-" + s : s;
}

inline Wide wide_from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = (s[0] == '-');
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bare sign in integer literal");
    Wide v = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9')
            throw std::invalid_argument("bad digit in integer literal: " + std::string(s));
        v = v * 10 + (c - '0');
    }
    return neg ? -v : v;
}

inline double wide_to_double(Wide v) { return double(v); }

} // namespace simplexmax
