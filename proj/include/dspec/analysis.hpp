#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dspec/spectrum.hpp"
#include "dspec/transform.hpp"

namespace dspec {

struct AsymptoticsFit {
    /// Half-integer estimate of (ind f + ind F) / 2.
    double L_hat = 0.0;
    /// Estimate of 1/2 int q + omega_1 + Omega_1.
    double sigma_hat = 0.0;
    /// Fitted exponent of n in gamma_n; expected 2 ind f.
    double gamma_exponent = 0.0;
    /// Partial sums of ((n - L)(sqrt(lambda_n) - (n - L) - sigma/(pi (n - L))))^2.
    std::vector<double> residual_sq_partial_sums;
    /// Last decade of the partial sums adds less than 1% of the total.
    bool plateau = false;
};

/// Needs at least 30 eigenvalues.
[[nodiscard]] AsymptoticsFit fit_asymptotics(const SpectralData& data);

/// Sign changes of the trace on its grid. Throws AmbiguousZero on a grazing zero.
[[nodiscard]] int count_zeros(const SolutionTrace& trace);

struct OscillationReport {
    bool ok = true;
    std::vector<int> counted;
    std::vector<int> expected;
};

/// Compares zero counts of each eigenfunction with n - Pi_f(lambda_n) - Pi_F(lambda_n).
[[nodiscard]] OscillationReport oscillation_check(const Problem& problem, const SpectralData& data,
                                                  const SolverOptions& opts = {});

/// Regularized trace from eigenvalues 0..2N; the 1/n^2 tail is extrapolated from the
/// partial sums through N and 2N.
/// Only for analytic potentials.
[[nodiscard]] double regularized_trace_series(const Problem& problem, int N, const SolverOptions& opts = {});

/// Same, from precomputed eigenvalues (at least 2N + 1 of them).
[[nodiscard]] double regularized_trace_series(const Problem& problem, std::span<const double> lambdas, int N);

/// Closed-form value of the regularized trace. Only for analytic potentials.
[[nodiscard]] double trace_closed_form(const Problem& problem);

struct TraceReport {
    double series_value = 0.0;
    double closed_form = 0.0;
    double a = 0.0;
    double b = 0.0;
};

[[nodiscard]] TraceReport trace_report(const Problem& problem, int N, const SolverOptions& opts = {});

struct InvariantReport {
    double before = 0.0;
    double after = 0.0;
    bool ok = false;
};

/// 1/2 int q + omega_1 + Omega_1 before and after t_hat; ok if they agree within tol.
[[nodiscard]] InvariantReport lemma_invariant_check(const Problem& problem, double tol = 1e-4,
                                                    const TransformOptions& opts = {});

/// beta_n (-1)^n > 0 and |beta_n (-1)^n - 1| <= tol for every n in data.
[[nodiscard]] bool symmetric_check(const SpectralData& data, double tol = 1e-5);

/// Prepends K prescribed eigenvalues (increasing, below lambdas[0]) and norming constants.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> data_chain(
    std::span<const double> lambdas, std::span<const double> gammas, int K,
    std::span<const double> prefix_lambdas, std::span<const double> prefix_gammas);

/// Spectral data of the hat transform: lambda_{n+1}, gamma_{n+1} / (lambda_{n+1} - lambda_0).
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> hat_data_map(
    std::span<const double> lambdas, std::span<const double> gammas);

}  // namespace dspec
