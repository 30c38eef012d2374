#include "dspec/transform.hpp"

#include <algorithm>
#include <cmath>

#include "dspec/errors.hpp"
#include "dspec/spectrum.hpp"

namespace dspec {
namespace {

constexpr double kPi = std::numbers::pi;

struct Layout {
    std::size_t n;   // intervals
    double h;
    std::size_t lo;  // first retained index
    std::size_t hi;  // last retained index
};

Layout layout(const TransformOptions& o) {
    if (o.intervals < 64) throw DomainViolation("transform grid needs at least 64 intervals");
    if (!(o.zone > o.ode.start_offset)) throw DomainViolation("exclusion zone must exceed the singular start offset");
    Layout l{o.intervals, kPi / o.intervals, 0, 0};
    l.lo = static_cast<std::size_t>(std::ceil(o.zone / l.h - 1e-9));
    l.hi = l.n - l.lo;
    if (l.lo < 3 || l.hi <= l.lo + 10) throw DomainViolation("exclusion zone does not fit the transform grid");
    return l;
}

// Value at t of the polynomial through (xs[k], ys[k]).
double lagrange(const double* xs, const double* ys, int m, double t) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        double b = ys[k];
        for (int j = 0; j < m; ++j)
            if (j != k) b *= (t - xs[j]) / (xs[k] - xs[j]);
        s += b;
    }
    return s;
}

// New potential from the log-derivative w of the transforming solution at lam:
// q_new = q - 2 w' + 2 a_f / x^2 + 2 a_F / (pi - x)^2.
// w holds entries for every grid index; the two routes are compared on the
// retained grid only. The closed form fills every interior node, and the
// endpoint too at a regular end (regular_*); a singular endpoint value is
// extrapolated.
Potential build(const Problem& p, double lam, const std::vector<double>& w, double a_f, double a_F,
                bool regular_left, bool regular_right, const TransformOptions& o, double& gap) {
    const Layout l = layout(o);
    const double s_f = ell(p.f) * (ell(p.f) + 1.0);
    const double s_F = ell(p.F) * (ell(p.F) + 1.0);
    std::vector<double> x(l.n + 1), v(l.n + 1, 0.0), out(l.n + 1, 0.0);
    for (std::size_t i = 0; i <= l.n; ++i) x[i] = i == l.n ? kPi : l.h * i;
    for (std::size_t i = 1; i < l.n; ++i) v[i] = w[i] + a_f / x[i] - a_F / (kPi - x[i]);

    const double c_f = 2.0 * a_f - 2.0 * s_f, c_F = 2.0 * a_F - 2.0 * s_F;
    auto closed_at = [&](std::size_t i) {
        double v = -p.q.value(x[i]) + 2.0 * lam + 2.0 * w[i] * w[i];
        if (c_f != 0.0) v += c_f / (x[i] * x[i]);
        if (c_F != 0.0) v += c_F / ((kPi - x[i]) * (kPi - x[i]));
        return v;
    };
    gap = 0.0;
    for (std::size_t i = l.lo; i <= l.hi; ++i) {
        const double closed = closed_at(i);
        const double dv = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * l.h);
        gap = std::max(gap, std::abs(closed - (p.q.value(x[i]) - 2.0 * dv)));
    }
    if (!(gap <= o.route_tol))
        throw NumericalFailure("transformed potential routes disagree by " + std::to_string(gap));

    for (std::size_t i = 1; i < l.n; ++i) out[i] = closed_at(i);
    out[0] = regular_left ? closed_at(0) : lagrange(&x[1], &out[1], 3, x[0]);
    out[l.n] = regular_right ? closed_at(l.n) : lagrange(&x[l.n - 3], &out[l.n - 3], 3, x[l.n]);
    return Potential(SampledPotential(x, out));
}

std::vector<double> interior(const Layout& l) {
    std::vector<double> g(l.n - 1);
    for (std::size_t i = 1; i < l.n; ++i) g[i - 1] = l.h * i;
    return g;
}

}  // namespace

std::vector<double> retained_grid(const TransformOptions& opts) {
    const Layout l = layout(opts);
    std::vector<double> g;
    for (std::size_t i = l.lo; i <= l.hi; ++i) g.push_back(l.h * i);
    return g;
}

double retained_distance(const Potential& a, const Potential& b, const TransformOptions& opts) {
    double d = 0.0;
    for (double x : retained_grid(opts)) d = std::max(d, std::abs(a.value(x) - b.value(x)));
    return d;
}

TransformResult t_hat(const Problem& problem, const TransformOptions& opts) {
    const Layout l = layout(opts);
    const SpectralData d = spectral_data(problem, 1, opts.ode);
    const double lam = d.lambdas[0];

    const auto grid = interior(l);
    const auto trace = eigenfunction_trace(problem, lam, d.betas[0], grid, opts.ode);
    std::vector<double> w(l.n + 1, 0.0);
    for (std::size_t i = 1; i < l.n; ++i) {
        if (!(trace.y[i - 1] > 0.0)) throw NumericalFailure("ground state vanishes inside the interval");
        w[i] = trace.dy[i - 1] / trace.y[i - 1];
    }
    const bool direct_left = ell(problem.f) == -1, direct_right = ell(problem.F) == -1;
    if (direct_left) w[0] = -problem.f.rational()(lam);
    if (direct_right) w[l.n] = problem.F.rational()(lam);

    TransformResult r;
    r.mu = lam;
    r.nu = d.gammas[0];
    r.problem.f = theta_hat(lam, problem.f);
    r.problem.F = theta_hat(lam, problem.F);
    r.problem.q = build(problem, lam, w, -(ell(problem.f) + 1.0), -(ell(problem.F) + 1.0), direct_left,
                        direct_right, opts, r.route_gap);
    return r;
}

TransformResult t_tilde(double mu, double nu, const Problem& problem, const TransformOptions& opts) {
    if (!(nu > 0.0)) throw DomainViolation("nu must be positive");
    const double lam0 = eigenvalues(problem, 1, opts.ode)[0];
    if (!(mu < lam0 - 1e-9 * std::max(1.0, std::abs(lam0))))
        throw DomainViolation("mu = " + std::to_string(mu) + " is not below the lowest eigenvalue " +
                              std::to_string(lam0));
    const Layout l = layout(opts);
    const bool left_open = ell(problem.f) <= 0;
    const bool right_open = ell(problem.F) <= 0;

    // phi over (0, pi], psi over [0, pi), endpoints only where nonsingular.
    std::vector<double> gphi = interior(l), gpsi = interior(l);
    if (right_open) gphi.push_back(kPi);
    if (left_open) gpsi.insert(gpsi.begin(), 0.0);
    const auto phi = regular_solution(problem, mu, Side::Left, gphi, opts.ode);
    const auto psi = regular_solution(problem, mu, Side::Right, gpsi, opts.ode);

    // u = psi - (chi(mu)/nu) phi, positive on (0, pi) for mu below the spectrum.
    const ScaledValue chi = char_function(problem, mu, opts.ode);
    const double lc = std::log(std::abs(chi.mantissa)) + chi.logscale - std::log(nu);
    const double sc = chi.mantissa < 0.0 ? 1.0 : -1.0;
    auto combine = [&](double py, double pdy, double pls, double sy, double sdy, double sls) {
        const double ref = std::max(sls, pls + lc);
        const double a = std::exp(sls - ref), b = sc * std::exp(pls + lc - ref);
        return std::pair{sy * a + py * b, sdy * a + pdy * b};
    };

    std::vector<double> w(l.n + 1, 0.0);
    const std::size_t off = left_open ? 1 : 0;
    for (std::size_t i = 1; i < l.n; ++i) {
        const std::size_t j = i - 1;
        const auto [u, du] = combine(phi.y[j], phi.dy[j], phi.logscale[j], psi.y[j + off], psi.dy[j + off],
                                     psi.logscale[j + off]);
        if (!(u > 0.0)) throw NumericalFailure("transforming solution is not positive inside the interval");
        w[i] = du / u;
    }

    double tau_left = 0.0, tau_right = 0.0;
    if (left_open) {
        const auto bp = boundary_polys(problem.f);
        const auto [u, du] = combine(bp.down(mu), -bp.up(mu), 0.0, psi.y[0], psi.dy[0], psi.logscale[0]);
        tau_left = -du / u;
        w[0] = du / u;
    }
    if (right_open) {
        const auto bp = boundary_polys(problem.F);
        const std::size_t k = phi.size() - 1;
        const auto [u, du] = combine(phi.y[k], phi.dy[k], phi.logscale[k], bp.down(mu), bp.up(mu), 0.0);
        tau_right = du / u;
        w[l.n] = du / u;
    }

    TransformResult r;
    r.mu = mu;
    r.nu = nu;
    r.problem.f = theta_tilde(mu, tau_left, problem.f);
    r.problem.F = theta_tilde(mu, tau_right, problem.F);
    r.problem.q = build(problem, mu, w, ell(r.problem.f) + 1.0, ell(r.problem.F) + 1.0, left_open, right_open,
                        opts, r.route_gap);
    return r;
}

ChainRecord apply_chain(const Problem& problem, std::span<const ChainStep> steps, const TransformOptions& opts) {
    ChainRecord rec;
    rec.problems.push_back(problem);
    for (const ChainStep& s : steps) {
        const Problem& cur = rec.problems.back();
        TransformResult r = s.direction == Direction::Hat ? t_hat(cur, opts) : t_tilde(s.mu, s.nu, cur, opts);
        rec.steps.push_back({s.direction, r.mu, r.nu});
        rec.problems.push_back(std::move(r.problem));
    }
    return rec;
}

}  // namespace dspec
