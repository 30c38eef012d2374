#pragma once

#include "dspec/herglotz.hpp"
#include "dspec/potential.hpp"

namespace dspec {

/// Boundary value problem -y'' + (l_f(l_f+1)/x^2 + l_F(l_F+1)/(pi-x)^2 + q) y = lambda y
/// with f at the left endpoint and F at the right.
struct Problem {
    Potential q;
    BoundaryObject f = BoundaryObject::inf(0);
    BoundaryObject F = BoundaryObject::inf(0);
};

/// q(x) plus both inverse square terms. Requires 0 < x < pi.
[[nodiscard]] double full_potential(const Problem& problem, double x);

/// Same as full_potential without the domain check; singular terms are
/// evaluated literally, so callers must stay away from singular endpoints.
[[nodiscard]] double full_potential_unchecked(const Problem& problem, double x);

}  // namespace dspec
