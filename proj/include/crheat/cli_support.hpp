#pragma once
// Parsing and formatting helpers for the command-line front end.
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace crheat::cli {

struct Range {
    double a = 0.0, b = 0.0;
    int count = 1;
};

inline double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw DomainError("cannot parse " + what + " '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw DomainError("cannot parse " + what + " '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

// "a:b:count" with count >= 1; a single count samples a only.
inline Range parse_range(const std::string& s) {
    auto f = split(s, ':');
    if (f.size() != 3) throw DomainError("range '" + s + "' must have the form a:b:count");
    Range r{parse_double(f[0], "range start"), parse_double(f[1], "range end"), 0};
    double c = parse_double(f[2], "range count");
    if (c < 1 || c != std::floor(c) || c > 1e6) throw DomainError("range count must be a positive integer");
    r.count = int(c);
    return r;
}

// "theta_range,phi_range"
inline std::pair<Range, Range> parse_grid(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2) throw DomainError("grid '" + s + "' must be two ranges a:b:count,a:b:count");
    return {parse_range(parts[0]), parse_range(parts[1])};
}

inline std::vector<double> samples(const Range& r) {
    std::vector<double> out;
    for (int i = 0; i < r.count; ++i) out.push_back(r.count == 1 ? r.a : r.a + (r.b - r.a) * i / (r.count - 1));
    return out;
}

inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw DomainError(what + " list is empty");
    return out;
}

// 17 significant digits round-trips every double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace crheat::cli
