#include "dspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "dspec/errors.hpp"
#include "dspec/parallel.hpp"

namespace dspec {
namespace {

constexpr double kPi = std::numbers::pi;

int chi_sign(const Problem& p, double lambda, const SolverOptions& opts) {
    const double m = char_function(p, lambda, opts).mantissa;
    return m < 0.0 ? -1 : 1;
}

double lambda_of(double s) { return s < 0.0 ? -s * s : s * s; }

double largest_pole(const BoundaryObject& f) {
    if (!f.is_rational() || f.rational().pole_count() == 0) return -kInfinity;
    return f.rational().poles().back();
}

bool zero_free(const SolutionTrace& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if ((t.y[i - 1] < 0.0) != (t.y[i] < 0.0)) return false;
    return true;
}

// A point below the whole spectrum.
double spectrum_floor(const Problem& p, const SolverOptions& opts) {
    const auto grid = default_grid(p, 129);
    double qmin = kInfinity;
    for (double x : grid) qmin = std::min(qmin, p.q.value(x));
    const double below_poles = std::min(smallest_pole(p.f), smallest_pole(p.F)) - 1.0;
    const double base = std::min(qmin - 1.0, below_poles);
    double d = 1.0;
    for (int it = 0; it < 60; ++it, d *= 2.0) {
        const double lam = base - (it == 0 ? 0.0 : d);
        if (chi_sign(p, lam, opts) < 0 && zero_free(left_regular(p, lam, grid, opts))) return lam;
    }
    throw BracketFailure("no spectrum floor found below " + std::to_string(base));
}

double polish(const Problem& p, double a, double b, const SolverOptions& opts) {
    const double ref = char_function(p, a, opts).logscale;
    auto f = [&](double lam) {
        const ScaledValue v = char_function(p, lam, opts);
        return v.mantissa * std::exp(v.logscale - ref);
    };
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) throw BracketFailure("bracket without sign change");
    auto tol = [](double u, double v) { return std::abs(v - u) <= 1e-13 * std::max(1.0, std::abs(u)); };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

struct Scan {
    std::vector<std::pair<double, double>> brackets;
};

Scan scan(const Problem& p, double s_lo, double s_hi, double step, const SolverOptions& opts) {
    const std::size_t n = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / step)) + 1;
    std::vector<double> lam(n);
    std::vector<int> sign(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = lambda_of(std::min(s_lo + step * i, s_hi));
    parallel_for(n, [&](std::size_t i) { sign[i] = chi_sign(p, lam[i], opts); });
    Scan out;
    for (std::size_t i = 1; i < n; ++i)
        if (sign[i] != sign[i - 1]) out.brackets.emplace_back(lam[i - 1], lam[i]);
    return out;
}

}  // namespace

double half_index(const Problem& problem) { return 0.5 * (index(problem.f) + index(problem.F)); }

double sigma(const Problem& problem) {
    return 0.5 * problem.q.integral() + omega(problem.f).omega1 + omega(problem.F).omega1;
}

std::vector<double> eigenvalues(const Problem& problem, int count, const SolverOptions& opts) {
    if (count < 1) throw DomainViolation("eigenvalue count must be positive");
    const double L = half_index(problem);
    const double b = sigma(problem) / kPi;
    const double floor = spectrum_floor(problem, opts);

    // First index from which eigenvalue n sits in the half-width window
    // around its two-term asymptotic centre.
    const double pole_top = std::max(largest_pole(problem.f), largest_pole(problem.F));
    int K = 0;
    while (K - L < 3.0 || std::abs(b) / (K - L) >= 0.25 ||
           (pole_top > -kInfinity && lambda_of(K - L - 0.5) < pole_top + 1.0))
        ++K;

    const double s_floor = -std::sqrt(-std::min(floor, 0.0)) * 1.0137 - 0.0113;
    std::vector<std::pair<double, double>> brackets;
    bool found = false;
    for (int attempt = 0; attempt < 4 && !found; ++attempt) {
        const double s_top = K - L + 0.5;
        double step = 0.05;
        for (int refine = 0; refine <= 6; ++refine, step *= 0.5) {
            Scan sc = scan(problem, s_floor, s_top, step, opts);
            const auto got = static_cast<int>(sc.brackets.size());
            if (got == K + 1) {
                brackets = std::move(sc.brackets);
                found = true;
                break;
            }
            if (got > K + 1) break;
        }
        if (!found) K = 2 * K + 3;
    }
    if (!found)
        throw MissedRoot("sign changes of chi below the asymptotic window do not match the index count");

    const int total = std::max(count, K + 1);
    for (int n = K + 1; n < total; ++n) {
        const double c = n - L + b / (n - L);
        brackets.emplace_back(lambda_of(c - 0.5), lambda_of(c + 0.5));
    }
    std::vector<double> out(total);
    parallel_for(total, [&](std::size_t n) {
        auto [lo, hi] = brackets[n];
        if (static_cast<int>(n) > K) {
            const int expect_lo = (n % 2 == 0) ? -1 : 1;
            if (chi_sign(problem, lo, opts) != expect_lo || chi_sign(problem, hi, opts) != -expect_lo)
                throw BracketFailure("eigenvalue " + std::to_string(n) + " not bracketed by [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        out[n] = polish(problem, lo, hi, opts);
    });
    out.resize(count);
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw MissedRoot("eigenvalues are not strictly increasing");
    return out;
}

namespace {

double ratio_at(const Problem& p, double lambda, double x, const SolverOptions& opts) {
    const std::vector<double> g{x};
    const auto phi = left_regular(p, lambda, g, opts);
    const auto psi = right_regular(p, lambda, g, opts);
    const double num = psi.y[0] * phi.y[0] + psi.dy[0] * phi.dy[0];
    const double den = phi.y[0] * phi.y[0] + phi.dy[0] * phi.dy[0];
    return num / den * std::exp(psi.logscale[0] - phi.logscale[0]);
}

}  // namespace

double beta(const Problem& problem, double lambda, const SolverOptions& opts) {
    const double b1 = ratio_at(problem, lambda, kPi / 2, opts);
    const double b2 = ratio_at(problem, lambda, kPi / 3, opts);
    if (!(b1 != 0.0) || !std::isfinite(b1)) throw NotAnEigenvalue("beta vanishes or is not finite");
    if (std::abs(b1 - b2) > 1e-4 * std::abs(b1))
        throw NotAnEigenvalue("psi/phi differs between pi/2 and pi/3 at lambda = " + std::to_string(lambda));
    return b1;
}

std::vector<double> norming_constants(const Problem& problem, std::span<const double> lambdas,
                                      const SolverOptions& opts) {
    std::vector<double> out(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t n) {
        out[n] = char_derivative(problem, lambdas[n], opts) / beta(problem, lambdas[n], opts);
        if (!(out[n] > 0.0)) throw NonPositiveGamma("gamma_" + std::to_string(n) + " is not positive");
    });
    return out;
}

SpectralData spectral_data(const Problem& problem, int count, const SolverOptions& opts) {
    SpectralData d;
    d.ind_f = index(problem.f);
    d.ind_F = index(problem.F);
    d.lambdas = eigenvalues(problem, count, opts);
    d.betas.resize(count);
    d.gammas.resize(count);
    parallel_for(count, [&](std::size_t n) {
        d.betas[n] = beta(problem, d.lambdas[n], opts);
        d.gammas[n] = char_derivative(problem, d.lambdas[n], opts) / d.betas[n];
        if (!(d.gammas[n] > 0.0)) throw NonPositiveGamma("gamma_" + std::to_string(n) + " is not positive");
    });
    return d;
}

SolutionTrace eigenfunction_trace(const Problem& problem, double lambda, double beta,
                                  std::span<const double> grid, const SolverOptions& opts) {
    const auto mid = std::upper_bound(grid.begin(), grid.end(), kPi / 2) - grid.begin();
    SolutionTrace out;
    if (mid > 0) out = left_regular(problem, lambda, grid.first(mid), opts);
    if (static_cast<std::size_t>(mid) < grid.size()) {
        const auto psi = right_regular(problem, lambda, grid.subspan(mid), opts);
        const double lb = std::log(std::abs(beta));
        const double sb = beta < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            out.grid.push_back(psi.grid[i]);
            out.y.push_back(sb * psi.y[i]);
            out.dy.push_back(sb * psi.dy[i]);
            out.logscale.push_back(psi.logscale[i] - lb);
        }
    }
    out.side = Side::Left;
    out.lambda = lambda;
    return out;
}

double norming_integral_check(const Problem& problem, double lambda, const SolverOptions& opts) {
    if (index(problem.f) >= 1 || index(problem.F) >= 1)
        throw Unsupported("norming integral needs ind f <= 0 and ind F <= 0");
    const double b = beta(problem, lambda, opts);
    constexpr int m = 2048;
    std::vector<double> grid(m - 1);
    for (int i = 1; i < m; ++i) grid[i - 1] = kPi * i / m;
    const auto t = eigenfunction_trace(problem, lambda, b, grid, opts);
    const double left = ell(problem.f) >= 0 ? 0.0 : boundary_polys(problem.f).down(lambda);
    const double right = ell(problem.F) >= 0 ? 0.0 : boundary_polys(problem.F).down(lambda) / b;
    double sum = left * left + right * right;
    for (int i = 1; i < m; ++i) {
        const double v = t.value(i - 1);
        sum += (i % 2 == 1 ? 4.0 : 2.0) * v * v;
    }
    return sum * (kPi / m) / 3.0;
}

double product_representation(std::span<const double> lambdas, double L, double b, double lambda) {
    const int fl = static_cast<int>(std::floor(L));
    const bool integer = L == std::floor(L);
    double log_abs = integer ? std::log(kPi) : 0.0;
    int sign = -1;
    for (int n = fl + 1; n <= -1; ++n) log_abs -= 2.0 * std::log(std::abs(n - L));
    const int M = static_cast<int>(lambdas.size()) - 1;
    for (int n = 0; n <= M; ++n) {
        double factor = lambdas[n] - lambda;
        if (n > fl) factor /= (n - L) * (n - L);
        if (factor < 0.0) sign = -sign;
        log_abs += std::log(std::abs(factor));
    }
    // log of prod_{n > M} (lambda_n - lambda)/(n - L)^2 with lambda_n ~ (n - L)^2 + 2b
    log_abs += (2.0 * b - lambda) * boost::math::trigamma(M + 1 - L);
    return sign * std::exp(log_abs);
}

double product_representation_check(const Problem& problem, double lambda, int M,
                                    const SolverOptions& opts) {
    if (M < 1) throw DomainViolation("truncation must be positive");
    const auto lambdas = eigenvalues(problem, M + 1, opts);
    const double prod = product_representation(lambdas, half_index(problem), sigma(problem) / kPi, lambda);
    return prod / char_function(problem, lambda, opts).value();
}

}  // namespace dspec
