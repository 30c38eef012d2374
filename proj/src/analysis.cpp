#include "dspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/trigamma.hpp>

#include "dspec/errors.hpp"
#include "dspec/parallel.hpp"

namespace dspec {
namespace {

constexpr double kPi = std::numbers::pi;

// Least squares for y ~ sum_k c_k basis[k] via the normal equations.
std::vector<double> lsq(const std::vector<std::vector<double>>& basis, const std::vector<double>& y) {
    const std::size_t k = basis.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < y.size(); ++r) a[i][j] += basis[i][r] * basis[j][r];
        for (std::size_t r = 0; r < y.size(); ++r) a[i][k] += basis[i][r] * y[r];
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (!(std::abs(a[c][c]) > 0.0)) throw InsufficientData("degenerate least squares system");
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> out(k);
    for (std::size_t c = 0; c < k; ++c) out[c] = a[c][k] / a[c][c];
    return out;
}

}  // namespace

AsymptoticsFit fit_asymptotics(const SpectralData& data) {
    const auto N = static_cast<int>(data.lambdas.size());
    if (N < 30) throw InsufficientData("asymptotic fit needs at least 30 eigenvalues");
    if (data.gammas.size() != data.lambdas.size()) throw InsufficientData("gammas and lambdas differ in length");

    AsymptoticsFit fit;
    const int top = std::max(5, N / 10);
    double mean = 0.0;
    for (int n = N - top; n < N; ++n) mean += n - std::sqrt(data.lambdas[n]);
    fit.L_hat = std::round(2.0 * mean / top) / 2.0;
    const double L = fit.L_hat;

    std::vector<std::vector<double>> basis(3);
    std::vector<double> y;
    for (int n = 0; n < N; ++n) {
        const double m = n - L;
        if (m < std::max(3.0, N / 4.0)) continue;
        basis[0].push_back(1.0 / m);
        basis[1].push_back(std::pow(m, -3));
        basis[2].push_back(std::pow(m, -5));
        y.push_back(std::sqrt(data.lambdas[n]) - m);
    }
    if (y.size() < 10) throw InsufficientData("too few eigenvalues in the asymptotic range");
    fit.sigma_hat = kPi * lsq(basis, y)[0];

    // slope of log gamma_n against log(n - L) over the upper half
    std::vector<std::vector<double>> lx(2);
    std::vector<double> ly;
    for (int n = N / 2; n < N; ++n) {
        if (n - L < 3.0) continue;
        lx[0].push_back(1.0);
        lx[1].push_back(std::log(n - L));
        ly.push_back(std::log(data.gammas[n]));
    }
    fit.gamma_exponent = lsq(lx, ly)[1];

    double s = 0.0;
    for (int n = 0; n < N; ++n) {
        const double m = n - L;
        if (m < 3.0) {
            fit.residual_sq_partial_sums.push_back(s);
            continue;
        }
        const double r = m * (std::sqrt(data.lambdas[n]) - m - fit.sigma_hat / (kPi * m));
        s += r * r;
        fit.residual_sq_partial_sums.push_back(s);
    }
    const double total = fit.residual_sq_partial_sums.back();
    const double before = fit.residual_sq_partial_sums[N - top - 1];
    fit.plateau = total < 1e-10 || (total - before) < 0.01 * total;
    return fit;
}

int count_zeros(const SolutionTrace& trace) {
    const std::size_t n = trace.size();
    std::vector<double> v(n), d(n);
    double vs = 0.0, ds = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = trace.value(i);
        d[i] = trace.derivative(i);
        vs = std::max(vs, std::abs(v[i]));
        ds = std::max(ds, std::abs(d[i]));
    }
    int count = 0;
    int last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(v[i]) <= 1e-12 * vs && std::abs(d[i]) <= 1e-6 * ds)
            throw AmbiguousZero("grazing zero near x = " + std::to_string(trace.grid[i]));
        const int s = v[i] > 0.0 ? 1 : (v[i] < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

OscillationReport oscillation_check(const Problem& problem, const SpectralData& data, const SolverOptions& opts) {
    const std::size_t N = data.lambdas.size();
    OscillationReport r;
    r.counted.assign(N, 0);
    r.expected.assign(N, 0);
    const auto grid = default_grid(problem, 2049);
    parallel_for(N, [&](std::size_t n) {
        const double lam = data.lambdas[n];
        r.counted[n] = count_zeros(eigenfunction_trace(problem, lam, data.betas[n], grid, opts));
        r.expected[n] = static_cast<int>(n) - pole_count_upto(problem.f, lam) - pole_count_upto(problem.F, lam);
    });
    for (std::size_t n = 0; n < N; ++n) r.ok = r.ok && r.counted[n] == r.expected[n];
    return r;
}

namespace {

void require_analytic(const Problem& p) {
    if (!p.q.is_analytic()) throw Unsupported("trace needs an analytic potential");
}

}  // namespace

double regularized_trace_series(const Problem& problem, std::span<const double> lambdas, int N) {
    require_analytic(problem);
    if (N < 1 || static_cast<int>(lambdas.size()) < 2 * N + 1)
        throw InsufficientData("trace series needs 2N + 1 eigenvalues");
    const double a = half_index(problem);
    const double b = sigma(problem) / kPi;
    auto term = [&](int n) {
        if (n < a) return lambdas[n];
        if (n == a) return lambdas[n] - b;
        return lambdas[n] - (n - a) * (n - a) - 2.0 * b;
    };
    double s1 = 0.0, s2 = 0.0;
    for (int n = 0; n <= 2 * N; ++n) {
        const double t = term(n);
        if (n <= N) s1 += t;
        s2 += t;
    }
    // Tail after M taken as C * sum_{n > M} (n - a)^-2 = C * trigamma(M + 1 - a);
    // the two partial sums fix C.
    const double t1 = boost::math::trigamma(N + 1 - a), t2 = boost::math::trigamma(2 * N + 1 - a);
    const double C = (s2 - s1) / (t1 - t2);
    return s2 + C * t2;
}

double regularized_trace_series(const Problem& problem, int N, const SolverOptions& opts) {
    require_analytic(problem);
    const auto lambdas = eigenvalues(problem, 2 * N + 1, opts);
    return regularized_trace_series(problem, lambdas, N);
}

double trace_closed_form(const Problem& problem) {
    require_analytic(problem);
    const int lf = ell(problem.f), lF = ell(problem.F);
    const int jf = index(problem.f), jF = index(problem.F);
    const Omega w = omega(problem.f), W = omega(problem.F);
    const double a = half_index(problem);
    const double b = sigma(problem) / kPi;
    auto sgn = [](int k) { return k % 2 == 0 ? 1.0 : -1.0; };
    double t = sgn(lf + jf) * (2 * lf + 1) / 4.0 * (problem.q.value(0.0) + lF * (lF + 1) / (kPi * kPi)) +
               sgn(lF + jF) * (2 * lF + 1) / 4.0 * (problem.q.value(kPi) + lf * (lf + 1) / (kPi * kPi)) -
               0.5 * w.omega1 * w.omega1 - 0.5 * W.omega1 * W.omega1 - w.omega2 - W.omega2;
    if (a <= -1.0) t -= (a * a + a + 6.0 * b) * (2.0 * a + 1.0) / 6.0;
    return t;
}

TraceReport trace_report(const Problem& problem, int N, const SolverOptions& opts) {
    TraceReport r;
    r.a = half_index(problem);
    r.b = sigma(problem) / kPi;
    r.closed_form = trace_closed_form(problem);
    r.series_value = regularized_trace_series(problem, N, opts);
    return r;
}

InvariantReport lemma_invariant_check(const Problem& problem, double tol, const TransformOptions& opts) {
    InvariantReport r;
    r.before = sigma(problem);
    r.after = sigma(t_hat(problem, opts).problem);
    r.ok = std::abs(r.before - r.after) <= tol;
    return r;
}

bool symmetric_check(const SpectralData& data, double tol) {
    for (std::size_t n = 0; n < data.betas.size(); ++n) {
        const double s = (n % 2 == 0 ? 1.0 : -1.0) * data.betas[n];
        if (!(s > 0.0) || std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

std::pair<std::vector<double>, std::vector<double>> data_chain(std::span<const double> lambdas,
                                                               std::span<const double> gammas, int K,
                                                               std::span<const double> prefix_lambdas,
                                                               std::span<const double> prefix_gammas) {
    if (K < 0 || static_cast<int>(prefix_lambdas.size()) != K || static_cast<int>(prefix_gammas.size()) != K)
        throw DomainViolation("prefix lists must have length K");
    if (lambdas.empty() || lambdas.size() != gammas.size()) throw DomainViolation("lambdas and gammas differ in length");
    for (int k = 0; k < K; ++k) {
        if (!(prefix_gammas[k] > 0.0)) throw DomainViolation("prefix norming constants must be positive");
        if (!(prefix_lambdas[k] < (k + 1 < K ? prefix_lambdas[k + 1] : lambdas[0])))
            throw DomainViolation("prefix eigenvalues must increase and stay below lambda_0");
    }
    for (double g : gammas)
        if (!(g > 0.0)) throw DomainViolation("norming constants must be positive");

    // lambda_j for j >= -K
    auto lam = [&](int j) { return j < 0 ? prefix_lambdas[j + K] : lambdas[j]; };
    auto gam = [&](int j) { return j < 0 ? prefix_gammas[j + K] : gammas[j]; };
    const int total = static_cast<int>(lambdas.size()) + K;
    std::vector<double> l(total), g(total);
    for (int n = 0; n < total; ++n) {
        l[n] = lam(n - K);
        double p = gam(n - K);
        for (int m = 0; m < std::min(n, K); ++m) p *= lam(n - K) - lam(m - K);
        g[n] = p;
    }
    return {l, g};
}

std::pair<std::vector<double>, std::vector<double>> hat_data_map(std::span<const double> lambdas,
                                                                 std::span<const double> gammas) {
    if (lambdas.size() < 2 || lambdas.size() != gammas.size()) throw InsufficientData("need at least two eigenvalues");
    std::vector<double> l, g;
    for (std::size_t n = 1; n < lambdas.size(); ++n) {
        l.push_back(lambdas[n]);
        g.push_back(gammas[n] / (lambdas[n] - lambdas[0]));
    }
    return {l, g};
}

}  // namespace dspec
