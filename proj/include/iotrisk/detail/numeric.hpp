#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace iotrisk::detail {

// Kahan-Babuska-Neumaier compensated sum.
inline double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

// Compensated sum over a canonical (ascending) ordering of the addends.
// Sorting first makes the result independent of the caller's element order:
// permutations of the same value multiset produce bit-identical sums.
inline double stable_sum(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return neumaier_sum(xs);
}

inline double rel_diff(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace iotrisk::detail
