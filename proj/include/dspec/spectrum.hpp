#pragma once

#include <span>
#include <vector>

#include "dspec/ode.hpp"

namespace dspec {

struct SpectralData {
    std::vector<double> lambdas;
    std::vector<double> gammas;
    std::vector<double> betas;
    int ind_f = 0;
    int ind_F = 0;
};

/// (ind f + ind F) / 2.
[[nodiscard]] double half_index(const Problem& problem);

/// 1/2 int q + omega_1(f) + omega_1(F).
[[nodiscard]] double sigma(const Problem& problem);

/// The first `count` eigenvalues in increasing order.
[[nodiscard]] std::vector<double> eigenvalues(const Problem& problem, int count,
                                              const SolverOptions& opts = {});

/// psi(., lambda) / phi(., lambda) at an eigenvalue.
[[nodiscard]] double beta(const Problem& problem, double lambda, const SolverOptions& opts = {});

/// gamma_n = chi'(lambda_n) / beta_n.
[[nodiscard]] std::vector<double> norming_constants(const Problem& problem,
                                                    std::span<const double> lambdas,
                                                    const SolverOptions& opts = {});

[[nodiscard]] SpectralData spectral_data(const Problem& problem, int count,
                                         const SolverOptions& opts = {});

/// Integral of phi(., lambda)^2 over (0, pi). Only for ind f <= 0 and ind F <= 0.
[[nodiscard]] double norming_integral_check(const Problem& problem, double lambda,
                                            const SolverOptions& opts = {});

/// Truncated product over the given eigenvalues, with the tail beyond them
/// taken from the two-term asymptotics.
[[nodiscard]] double product_representation(std::span<const double> lambdas, double L, double b,
                                            double lambda);

/// Ratio of the truncated product over M + 1 eigenvalues to chi(lambda).
[[nodiscard]] double product_representation_check(const Problem& problem, double lambda, int M,
                                                  const SolverOptions& opts = {});

/// Eigenfunction phi(., lambda) on the grid: taken from phi left of pi/2 and from
/// psi / beta right of it, so neither solution is pushed towards the far endpoint.
[[nodiscard]] SolutionTrace eigenfunction_trace(const Problem& problem, double lambda, double beta,
                                                std::span<const double> grid,
                                                const SolverOptions& opts = {});

}  // namespace dspec
