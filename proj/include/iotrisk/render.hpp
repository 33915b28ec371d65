#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace iotrisk {

// Rendering rules live here and only here: computation keeps full precision,
// rounding happens at the presentation edge.

// Shortest decimal form that round-trips to the same double. Fixed notation
// is used while it stays readable (so 700000 rather than 7e+05), scientific
// otherwise; both forms parse back to the identical bits.
inline std::string render_full(double x) {
    char buf[64];
    const double mag = std::abs(x);
    const bool fixed_friendly = x == 0.0 || (mag >= 1e-4 && mag < 1e16);
    const auto [ptr, ec] =
        fixed_friendly
            ? std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed)
            : std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

// Three-decimal fraction, e.g. 0.045.
inline std::string render_fraction3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

// One-decimal percent, e.g. 4.5%.
inline std::string render_percent1(double fraction) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
    return buf;
}

// Money with its currency tag, two decimals.
inline std::string render_money(double amount, const std::string& currency) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s %.2f", currency.c_str(), amount);
    return buf;
}

}  // namespace iotrisk
