#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dspec/herglotz.hpp"

namespace dspec::testing {

inline constexpr double kPi = std::numbers::pi;

/// Random rational HN function with up to max_poles poles in [-6, 6].
inline RationalHN random_rational(std::mt19937_64& rng, int max_poles, bool allow_linear = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, max_poles);
    const int d = count(rng);
    std::vector<double> poles;
    while (static_cast<int>(poles.size()) < d) {
        const double p = -6.0 + 12.0 * u(rng);
        bool far = true;
        for (double q : poles) far = far && std::abs(p - q) > 0.3;
        if (far) poles.push_back(p);
    }
    std::sort(poles.begin(), poles.end());
    std::vector<double> res(d);
    for (double& r : res) r = 0.2 + 2.0 * u(rng);
    const double h0 = (allow_linear && u(rng) < 0.5) ? 0.2 + 2.0 * u(rng) : 0.0;
    const double h = -3.0 + 6.0 * u(rng);
    return RationalHN(h0, h, poles, res);
}

/// Random boundary object: a symbol infinity_n (n <= 3) or a rational function.
inline BoundaryObject random_boundary(std::mt19937_64& rng, int max_poles) {
    std::uniform_int_distribution<int> pick(0, 5);
    const int k = pick(rng);
    if (k <= 1) return BoundaryObject::inf(std::uniform_int_distribution<int>(0, 3)(rng));
    return random_rational(rng, max_poles);
}

}  // namespace dspec::testing
