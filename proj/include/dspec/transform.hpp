#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "dspec/ode.hpp"

namespace dspec {

struct TransformOptions {
    /// Tighter than the solver default.
    SolverOptions ode{.rel_tol = 1e-12, .abs_tol = 1e-14};
    /// Uniform intervals on [0, pi] for the transformed potential.
    std::size_t intervals = 4096;
    /// Samples closer than this to an endpoint are left out of the route check
    /// and of retained-grid comparisons.
    double zone = 0.02 * std::numbers::pi;
    /// Allowed sup-norm gap between the two routes for the new potential.
    double route_tol = 1e-4;
};

struct TransformResult {
    Problem problem;
    double mu = 0.0;
    double nu = 0.0;
    /// Sup-norm gap between the closed form and the differentiated route.
    double route_gap = 0.0;
};

/// Removes the lowest eigenvalue; mu, nu are that eigenvalue and its norming constant.
[[nodiscard]] TransformResult t_hat(const Problem& problem, const TransformOptions& opts = {});

/// Adds mu as a new lowest eigenvalue with norming constant nu. Requires mu < lambda_0 and nu > 0.
[[nodiscard]] TransformResult t_tilde(double mu, double nu, const Problem& problem,
                                      const TransformOptions& opts = {});

enum class Direction { Hat, Tilde };

struct ChainStep {
    Direction direction = Direction::Hat;
    double mu = 0.0;
    double nu = 0.0;
};

struct ChainRecord {
    /// Hat steps carry the (mu, nu) they removed, tilde steps the ones they added.
    std::vector<ChainStep> steps;
    /// problems[0] is the input, problems[k] the result of step k.
    std::vector<Problem> problems;
};

[[nodiscard]] ChainRecord apply_chain(const Problem& problem, std::span<const ChainStep> steps,
                                      const TransformOptions& opts = {});

/// Uniform grid x_i = pi i / intervals restricted to [zone, pi - zone].
[[nodiscard]] std::vector<double> retained_grid(const TransformOptions& opts = {});

/// sup |a - b| over retained_grid.
[[nodiscard]] double retained_distance(const Potential& a, const Potential& b,
                                       const TransformOptions& opts = {});

}  // namespace dspec
