#pragma once

#include <cmath>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "dspec/problem.hpp"

namespace dspec {

struct SolverOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Distance from a singular endpoint at which integration starts.
    double start_offset = 1e-4 * std::numbers::pi;
};

enum class Side { Left, Right };

/// Samples of a regular solution. The true value at grid[i] is y[i] * exp(logscale[i]),
/// likewise for the derivative dy (always d/dx).
struct SolutionTrace {
    std::vector<double> grid;
    std::vector<double> y;
    std::vector<double> dy;
    std::vector<double> logscale;
    Side side = Side::Left;
    double lambda = 0.0;

    [[nodiscard]] std::size_t size() const { return grid.size(); }
    [[nodiscard]] double value(std::size_t i) const { return y[i] * std::exp(logscale[i]); }
    [[nodiscard]] double derivative(std::size_t i) const { return dy[i] * std::exp(logscale[i]); }
};

/// Real number kept as mantissa * exp(logscale).
struct ScaledValue {
    double mantissa = 0.0;
    double logscale = 0.0;
    [[nodiscard]] double value() const { return mantissa * std::exp(logscale); }
};

/// Left regular solution phi(., lambda) sampled on an increasing grid inside (0, pi).
[[nodiscard]] SolutionTrace left_regular(const Problem& problem, double lambda,
                                         std::span<const double> grid,
                                         const SolverOptions& opts = {});

/// Right regular solution psi(., lambda) sampled on an increasing grid inside (0, pi).
[[nodiscard]] SolutionTrace right_regular(const Problem& problem, double lambda,
                                          std::span<const double> grid,
                                          const SolverOptions& opts = {});

/// Like left_regular/right_regular, but the grid may include the far endpoint
/// (x = pi for the left solution, x = 0 for the right one) when that endpoint
/// carries no inverse square term.
[[nodiscard]] SolutionTrace regular_solution(const Problem& problem, double lambda, Side side,
                                             std::span<const double> grid,
                                             const SolverOptions& opts = {});

/// Wronskian phi psi' - phi' psi evaluated at x (default pi/2).
[[nodiscard]] ScaledValue char_function(const Problem& problem, double lambda,
                                        const SolverOptions& opts = {},
                                        double x = std::numbers::pi / 2);

/// d chi / d lambda by central differences with one Richardson step.
/// The perturbed solves replay the step sequence of the solve at lambda so
/// the integration error cancels in the difference.
[[nodiscard]] double char_derivative(const Problem& problem, double lambda,
                                     const SolverOptions& opts = {});

/// 513 uniform interior points, refined fourfold within 0.05 pi of an endpoint
/// carrying an inverse square singularity.
[[nodiscard]] std::vector<double> default_grid(const Problem& problem, std::size_t n = 513);

/// CSV with header x,y,dy,logscale.
void write_trace_csv(std::ostream& os, const SolutionTrace& trace);

}  // namespace dspec
