#include "dspec/ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "dspec/errors.hpp"

namespace dspec {

double full_potential_unchecked(const Problem& problem, double x) {
    const double lf = ell(problem.f);
    const double lF = ell(problem.F);
    double v = problem.q.value(x);
    if (lf > 0) v += lf * (lf + 1.0) / (x * x);
    if (lF > 0) {
        const double r = std::numbers::pi - x;
        v += lF * (lF + 1.0) / (r * r);
    }
    return v;
}

double full_potential(const Problem& problem, double x) {
    if (!(x > 0.0 && x < std::numbers::pi)) throw OutOfDomain("full potential evaluated outside (0, pi)");
    return full_potential_unchecked(problem, x);
}

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;
constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxSteps = 2'000'000;

// Integration runs in t = x (left) or t = pi - x (right); in t the equation
// and the initial data take the same form at both ends.
struct Sweep {
    const Problem& problem;
    double lambda;
    Side side;

    [[nodiscard]] double x_of(double t) const { return side == Side::Left ? t : kPi - t; }
    [[nodiscard]] const BoundaryObject& start_object() const {
        return side == Side::Left ? problem.f : problem.F;
    }
    [[nodiscard]] const BoundaryObject& far_object() const {
        return side == Side::Left ? problem.F : problem.f;
    }
    void operator()(const State& s, State& ds, double t) const {
        ds[0] = s[1];
        ds[1] = (full_potential_unchecked(problem, x_of(t)) - lambda) * s[0];
    }
};

struct Sample {
    double y;
    double p;  // d/dt
    double logscale;
};

struct Node {
    double t;
    bool is_target;
};

// Rescales by a power of two so that max(|y|, |p|) stays within [1e-8, 1e8].
void renormalize(State& s, double& logscale) {
    const double m = std::max(std::abs(s[0]), std::abs(s[1]));
    if (m > 1e8 || (m < 1e-8 && m > 0.0)) {
        const int e = std::ilogb(m);
        s[0] = std::ldexp(s[0], -e);
        s[1] = std::ldexp(s[1], -e);
        logscale += e * std::numbers::ln2;
    }
}

double double_factorial_odd(int l) {
    double r = 1.0;
    for (int k = 0; k <= l; ++k) r *= 2.0 * k + 1.0;
    return r;
}

struct Start {
    double t0;
    State s;
    double logscale;
};

Start start_state(const Sweep& sw, const SolverOptions& opts) {
    const BoundaryObject& b = sw.start_object();
    const int l = ell(b);
    if (l <= 0) {
        const PolyPair polys = boundary_polys(b);
        State s{polys.down(sw.lambda), -polys.up(sw.lambda)};
        const double m = std::max(std::abs(s[0]), std::abs(s[1]));
        if (!(m > 0.0) || !std::isfinite(m)) throw NumericalFailure("degenerate initial data");
        s[0] /= m;
        s[1] /= m;
        return {0.0, s, std::log(m)};
    }
    // Frobenius series y = t^(l+1)/(2l+1)!! sum a_m t^(2m) for
    // -y'' + l(l+1)/t^2 y = E y with E = lambda minus the regular part of the
    // potential at the start point.
    const double t0 = opts.start_offset;
    const double regular = full_potential_unchecked(sw.problem, sw.x_of(t0)) - l * (l + 1.0) / (t0 * t0);
    const double e = sw.lambda - regular;
    double a = 1.0, ys = 1.0, ps = l + 1.0;
    for (int m = 1; m < 400; ++m) {
        a *= -e * t0 * t0 / (2.0 * m * (2.0 * l + 2.0 * m + 1.0));
        ys += a;
        ps += (l + 1.0 + 2.0 * m) * a;
        if (std::abs(a) < 1e-18 * std::abs(ys)) break;
    }
    State s{ys, ps / t0};
    double logscale = (l + 1.0) * std::log(t0) - std::log(double_factorial_odd(l));
    const double m = std::max(std::abs(s[0]), std::abs(s[1]));
    s[0] /= m;
    s[1] /= m;
    logscale += std::log(m);
    return {t0, s, logscale};
}

// Integrates to every target (ascending t). Either records the accepted nodes
// or replays a previously recorded node sequence with fixed steps.
std::vector<Sample> integrate(const Sweep& sw, std::span<const double> targets, const SolverOptions& opts,
                              std::vector<Node>* record, const std::vector<Node>* replay) {
    const Start st = start_state(sw, opts);
    State s = st.s;
    double logscale = st.logscale;
    double t = st.t0;
    std::vector<Sample> out;
    out.reserve(targets.size());

    if (replay != nullptr) {
        odeint::runge_kutta_fehlberg78<State> stepper;
        for (const Node& n : *replay) {
            if (n.t > t) {
                stepper.do_step(sw, s, t, n.t - t);
                t = n.t;
                renormalize(s, logscale);
            }
            if (n.is_target) out.push_back({s[0], s[1], logscale});
        }
        if (out.size() != targets.size()) throw NumericalFailure("replay schedule does not match targets");
        return out;
    }

    auto ctrl = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<State>());
    double dt = st.t0 > 0.0 ? 0.1 * st.t0 : 1e-3;
    std::size_t steps = 0;
    for (double target : targets) {
        if (target < t) throw DomainViolation("grid point precedes the start of integration");
        while (t < target) {
            const bool clipped = dt >= target - t;
            double step = clipped ? target - t : dt;
            const double before = t;
            const auto res = ctrl.try_step(sw, s, t, step);
            if (res == odeint::success) {
                if (clipped) t = target;
                else dt = step;
                if (clipped && step > dt) dt = step;
                renormalize(s, logscale);
                if (record != nullptr) record->push_back({t, false});
            } else {
                dt = step;
                t = before;
            }
            if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
                throw NumericalFailure("integrator produced a non-finite value");
            if (++steps > kMaxSteps) throw NumericalFailure("integrator step budget exhausted");
            if (dt < 1e-15) throw NumericalFailure("integrator step size underflow");
        }
        out.push_back({s[0], s[1], logscale});
        if (record != nullptr) record->push_back({t, true});
    }
    return out;
}

void check_far_endpoint(const Sweep& sw, double t_max, bool allow_far_endpoint) {
    if (t_max < kPi) return;
    if (t_max > kPi || !allow_far_endpoint || ell(sw.far_object()) > 0)
        throw DomainViolation("grid reaches a singular endpoint");
}

SolutionTrace solve_on_grid(const Problem& problem, double lambda, Side side, std::span<const double> grid,
                            const SolverOptions& opts, bool allow_far_endpoint) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainViolation("trace grid must be strictly increasing");

    const Sweep sw{problem, lambda, side};
    std::vector<double> targets(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        targets[i] = side == Side::Left ? grid[i] : kPi - grid[grid.size() - 1 - i];
    if (!targets.empty()) check_far_endpoint(sw, targets.back(), allow_far_endpoint);

    const auto samples = integrate(sw, targets, opts, nullptr, nullptr);

    SolutionTrace tr;
    tr.side = side;
    tr.lambda = lambda;
    tr.grid.assign(grid.begin(), grid.end());
    tr.y.resize(grid.size());
    tr.dy.resize(grid.size());
    tr.logscale.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t k = side == Side::Left ? i : grid.size() - 1 - i;
        tr.y[i] = samples[k].y;
        tr.dy[i] = side == Side::Left ? samples[k].p : -samples[k].p;
        tr.logscale[i] = samples[k].logscale;
    }
    return tr;
}

void check_open_interval(std::span<const double> grid) {
    for (double x : grid)
        if (!(x > 0.0 && x < kPi)) throw DomainViolation("trace grid must lie inside (0, pi)");
}

ScaledValue wronskian(const Sample& left, const Sample& right) {
    // right.p is d/dt = -d/dx
    return {left.y * (-right.p) - left.p * right.y, left.logscale + right.logscale};
}

}  // namespace

SolutionTrace left_regular(const Problem& problem, double lambda, std::span<const double> grid,
                           const SolverOptions& opts) {
    check_open_interval(grid);
    return solve_on_grid(problem, lambda, Side::Left, grid, opts, false);
}

SolutionTrace right_regular(const Problem& problem, double lambda, std::span<const double> grid,
                            const SolverOptions& opts) {
    check_open_interval(grid);
    return solve_on_grid(problem, lambda, Side::Right, grid, opts, false);
}

SolutionTrace regular_solution(const Problem& problem, double lambda, Side side, std::span<const double> grid,
                               const SolverOptions& opts) {
    return solve_on_grid(problem, lambda, side, grid, opts, true);
}

ScaledValue char_function(const Problem& problem, double lambda, const SolverOptions& opts, double x) {
    if (!(x > 0.0 && x < kPi)) throw DomainViolation("Wronskian abscissa must lie inside (0, pi)");
    const std::array<double, 1> tl{x}, tr{kPi - x};
    const auto l = integrate(Sweep{problem, lambda, Side::Left}, tl, opts, nullptr, nullptr);
    const auto r = integrate(Sweep{problem, lambda, Side::Right}, tr, opts, nullptr, nullptr);
    return wronskian(l[0], r[0]);
}

double char_derivative(const Problem& problem, double lambda, const SolverOptions& opts) {
    const std::array<double, 1> tl{kPi / 2}, tr{kPi / 2};
    std::vector<Node> left_nodes, right_nodes;
    const auto l0 = integrate(Sweep{problem, lambda, Side::Left}, tl, opts, &left_nodes, nullptr);
    const auto r0 = integrate(Sweep{problem, lambda, Side::Right}, tr, opts, &right_nodes, nullptr);
    const double ref = wronskian(l0[0], r0[0]).logscale;

    auto chi_at = [&](double lam) {
        const auto l = integrate(Sweep{problem, lam, Side::Left}, tl, opts, nullptr, &left_nodes);
        const auto r = integrate(Sweep{problem, lam, Side::Right}, tr, opts, nullptr, &right_nodes);
        const ScaledValue w = wronskian(l[0], r[0]);
        return w.mantissa * std::exp(w.logscale - ref);
    };

    const double h = std::max(1e-5, 1e-7 * std::abs(lambda));
    const double d1 = (chi_at(lambda + h) - chi_at(lambda - h)) / (2.0 * h);
    const double d2 = (chi_at(lambda + h / 2) - chi_at(lambda - h / 2)) / h;
    const double d = (4.0 * d2 - d1) / 3.0;
    return d * std::exp(ref);
}

std::vector<double> default_grid(const Problem& problem, std::size_t n) {
    const bool left_singular = ell(problem.f) >= 1;
    const bool right_singular = ell(problem.F) >= 1;
    const double zone = 0.05 * kPi;
    std::vector<double> g;
    g.reserve(4 * n);
    const double h = kPi / static_cast<double>(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = h * static_cast<double>(i);
        g.push_back(x);
        const bool refine = i < n && ((left_singular && x < zone) || (right_singular && x + h > kPi - zone));
        if (refine)
            for (int k = 1; k < 4; ++k) g.push_back(x + h * k / 4.0);
    }
    if (left_singular) {
        // points between the start offset and the first uniform node
        for (int k = 3; k >= 1; --k) g.insert(g.begin(), h * k / 4.0);
    }
    if (right_singular)
        for (int k = 1; k <= 3; ++k) g.push_back(kPi - h + h * k / 4.0);
    return g;
}

void write_trace_csv(std::ostream& os, const SolutionTrace& trace) {
    os << "x,y,dy,logscale\n";
    char buf[128];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", trace.grid[i], trace.y[i], trace.dy[i],
                      trace.logscale[i]);
        os << buf;
    }
}

}  // namespace dspec
