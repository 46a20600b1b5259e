#pragma once

#include <charconv>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "occu/error.hpp"

namespace occu::text {

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int precision) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(context + ": invalid number '" + std::string(s) + "'");
    }
    return v;
}

inline long long parse_integer(std::string_view s, const std::string& context) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(context + ": invalid integer '" + std::string(s) + "'");
    }
    return v;
}

inline std::vector<std::string> split_words(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    return words;
}

inline std::string join_doubles(std::span<const double> values) {
    std::string out;
    for (double v : values) {
        out += ' ';
        out += format_double(v);
    }
    return out;
}

}  // namespace occu::text
