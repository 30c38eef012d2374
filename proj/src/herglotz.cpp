#include "dspec/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dspec/errors.hpp"

namespace dspec {

// ---------------------------------------------------------------------------
// Polynomial

int Polynomial::degree() const {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        if (coeffs[i] != 0.0) return i;
    return -1;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
    return Polynomial(std::move(d));
}

bool Polynomial::is_zero() const { return degree() < 0; }

double Polynomial::scale() const {
    double s = 0.0;
    for (double c : coeffs) s = std::max(s, std::abs(c));
    return s;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return Polynomial({0.0});
    std::vector<double> c(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> c = p.coeffs;
    for (double& x : c) x *= s;
    return Polynomial(std::move(c));
}

std::pair<Polynomial, double> synthetic_divide(const Polynomial& p, double root) {
    const int n = static_cast<int>(p.coeffs.size());
    if (n <= 1) return {Polynomial({0.0}), n == 1 ? p.coeffs[0] : 0.0};
    std::vector<double> q(n - 1);
    double carry = p.coeffs[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        q[i] = carry;
        carry = p.coeffs[i] + carry * root;
    }
    return {Polynomial(std::move(q)), carry};
}

// ---------------------------------------------------------------------------
// RationalHN

RationalHN::RationalHN(double h0, double h, std::vector<double> poles, std::vector<double> residues)
    : h0_(h0), h_(h), poles_(std::move(poles)), residues_(std::move(residues)) {
    if (!(h0_ >= 0.0) || !std::isfinite(h0_) || !std::isfinite(h_))
        throw DomainViolation("RationalHN: h0 must be finite and nonnegative, h finite");
    if (poles_.size() != residues_.size())
        throw DomainViolation("RationalHN: poles and residues differ in length");
    for (std::size_t k = 0; k < poles_.size(); ++k) {
        if (!(residues_[k] > 0.0) || !std::isfinite(residues_[k]) || !std::isfinite(poles_[k]))
            throw DomainViolation("RationalHN: residues must be finite and positive");
        if (k > 0 && !(poles_[k] > poles_[k - 1]))
            throw DomainViolation("RationalHN: poles must be strictly increasing");
    }
}

double RationalHN::operator()(double lambda) const {
    double v = h0_ * lambda + h_;
    for (std::size_t k = 0; k < poles_.size(); ++k) {
        const double gap = poles_[k] - lambda;
        if (std::abs(gap) <= 1e-14 * std::max(1.0, std::abs(lambda)))
            throw PoleEvaluation("evaluation at pole " + std::to_string(poles_[k]));
        v += residues_[k] / gap;
    }
    return v;
}

double RationalHN::derivative(double lambda) const {
    double d = h0_;
    for (std::size_t k = 0; k < poles_.size(); ++k) {
        const double gap = poles_[k] - lambda;
        if (gap == 0.0) throw PoleEvaluation("derivative at pole " + std::to_string(poles_[k]));
        d += residues_[k] / (gap * gap);
    }
    return d;
}

// ---------------------------------------------------------------------------
// BoundaryObject

BoundaryObject::BoundaryObject(Singularity s) : value_(s) {
    if (s.n < 0) throw DomainViolation("singularity order must be nonnegative");
}

const RationalHN& BoundaryObject::rational() const {
    if (!is_rational()) throw DomainViolation("boundary object is a singularity symbol");
    return std::get<RationalHN>(value_);
}

int BoundaryObject::singularity_order() const {
    if (is_rational()) throw DomainViolation("boundary object is a rational function");
    return std::get<Singularity>(value_).n;
}

int index(const BoundaryObject& f) {
    if (!f.is_rational()) return -f.singularity_order() - 1;
    const auto& r = f.rational();
    return 2 * r.pole_count() + (r.h0() > 0.0 ? 1 : 0);
}

int ell(const BoundaryObject& f) { return -1 - std::min(0, index(f)); }

double evaluate(const RationalHN& f, double lambda) { return f(lambda); }

PolyPair poly_pair(const RationalHN& f) {
    const double h0p = f.h0() > 0.0 ? 1.0 / f.h0() : 1.0;
    const auto& poles = f.poles();
    const auto& res = f.residues();

    Polynomial down({h0p});
    for (double p : poles) down = down * Polynomial({p, -1.0});

    Polynomial up = Polynomial({f.h(), f.h0()}) * down;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        Polynomial term({res[k] * h0p});
        for (std::size_t j = 0; j < poles.size(); ++j)
            if (j != k) term = term * Polynomial({poles[j], -1.0});
        up = up + term;
    }
    return {up, down};
}

PolyPair boundary_polys(const BoundaryObject& f) {
    if (f.is_rational()) return poly_pair(f.rational());
    if (f.singularity_order() == 0) return {Polynomial({-1.0}), Polynomial({0.0})};
    throw DomainViolation("no boundary polynomials for an inverse square singularity");
}

double smallest_pole(const BoundaryObject& f) {
    if (!f.is_rational() || f.rational().poles().empty()) return kInfinity;
    return f.rational().poles().front();
}

int pole_count_upto(const BoundaryObject& f, double lambda) {
    if (!f.is_rational()) return 0;
    const auto& p = f.rational().poles();
    return static_cast<int>(std::upper_bound(p.begin(), p.end(), lambda) - p.begin());
}

Omega omega(const BoundaryObject& f) {
    const int ind = index(f);
    if (ind <= -1) {
        const double l = ell(f);
        const double pi = std::numbers::pi;
        return {-l * (l + 1.0) / (2.0 * pi), -l * l * (l + 1.0) * (l + 1.0) / (8.0 * pi * pi)};
    }
    const auto& r = f.rational();
    double pole_sum = 0.0;
    for (double p : r.poles()) pole_sum += p;
    if (ind % 2 == 1) return {1.0 / r.h0(), r.h() / r.h0() - pole_sum};
    return {-r.h(), -pole_sum};
}

// ---------------------------------------------------------------------------
// Theta transformations

namespace {

// Root of f(l) = level on the branch (lo, hi) of f, where f increases
// monotonically. Limits of f at the branch ends decide existence.
bool branch_limits_contain(const RationalHN& f, double lo, double hi, double level) {
    const double left = std::isfinite(lo) ? -kInfinity : (f.h0() > 0.0 ? -kInfinity : f.h());
    const double right = std::isfinite(hi) ? kInfinity : (f.h0() > 0.0 ? kInfinity : f.h());
    return left < level && level < right;
}

double solve_level_on_branch(const RationalHN& f, double lo, double hi, double level) {
    auto g = [&](double x) { return f(x) - level; };
    double a, b;
    if (std::isfinite(lo) && std::isfinite(hi)) {
        a = lo + 0.5 * (hi - lo);
        b = a;
        double step = 0.25 * (hi - lo);
        while (g(a) >= 0.0) {
            a = lo + step;
            step *= 0.5;
            if (step == 0.0) throw NumericalFailure("level bracket collapsed");
        }
        step = 0.25 * (hi - lo);
        while (g(b) <= 0.0) {
            b = hi - step;
            step *= 0.5;
            if (step == 0.0) throw NumericalFailure("level bracket collapsed");
        }
    } else if (std::isfinite(lo)) {
        double step = 1.0;
        a = lo + step;
        while (g(a) >= 0.0) {
            step *= 0.5;
            a = lo + step;
            if (step == 0.0) throw NumericalFailure("level bracket collapsed");
        }
        step = 1.0;
        b = lo + step;
        while (g(b) <= 0.0) {
            step *= 2.0;
            b = lo + step;
            if (!std::isfinite(b)) throw NumericalFailure("level bracket diverged");
        }
    } else if (std::isfinite(hi)) {
        double step = 1.0;
        b = hi - step;
        while (g(b) <= 0.0) {
            step *= 0.5;
            b = hi - step;
            if (step == 0.0) throw NumericalFailure("level bracket collapsed");
        }
        step = 1.0;
        a = hi - step;
        while (g(a) >= 0.0) {
            step *= 2.0;
            a = hi - step;
            if (!std::isfinite(a)) throw NumericalFailure("level bracket diverged");
        }
    } else {
        double step = 1.0;
        a = -step;
        while (g(a) >= 0.0) {
            step *= 2.0;
            a = -step;
            if (!std::isfinite(a)) throw NumericalFailure("level bracket diverged");
        }
        step = 1.0;
        b = step;
        while (g(b) <= 0.0) {
            step *= 2.0;
            b = step;
            if (!std::isfinite(b)) throw NumericalFailure("level bracket diverged");
        }
    }
    // Bisection to adjacent floating point numbers; g is monotone on [a, b].
    for (int it = 0; it < 2000; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (g(m) < 0.0) a = m; else b = m;
    }
    return std::abs(g(a)) < std::abs(g(b)) ? a : b;
}

// g(l) = (mu - l) / (f(l) - level) - offset, known to take the value
// `value_at_mu` at l = mu. Poles of g are the roots of f(l) = level other
// than mu, with residues (p - mu) / f'(p).
RationalHN ratio_transform(const RationalHN& f, double mu, double level, double value_at_mu,
                           bool skip_first_branch) {
    std::vector<double> edges;
    edges.push_back(-kInfinity);
    for (double p : f.poles()) edges.push_back(p);
    edges.push_back(kInfinity);

    std::vector<double> poles, residues;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        if (b == 0 && skip_first_branch) continue;
        if (!branch_limits_contain(f, edges[b], edges[b + 1], level)) continue;
        const double p = solve_level_on_branch(f, edges[b], edges[b + 1], level);
        poles.push_back(p);
        residues.push_back((p - mu) / f.derivative(p));
    }

    const double new_h0 = f.h0() > 0.0 ? 0.0 : 1.0 / (level - f.h());
    double new_h = value_at_mu - new_h0 * mu;
    for (std::size_t k = 0; k < poles.size(); ++k) new_h -= residues[k] / (poles[k] - mu);
    return RationalHN(new_h0, new_h, std::move(poles), std::move(residues));
}

}  // namespace

BoundaryObject theta_hat(double mu, const BoundaryObject& f) {
    if (!(mu < smallest_pole(f)))
        throw DomainViolation("theta_hat: mu must lie below the smallest pole");
    const int ind = index(f);
    if (ind <= 0) return BoundaryObject::inf(-ind);
    const auto& r = f.rational();
    const double fmu = r(mu);
    const double value_at_mu = -1.0 / r.derivative(mu) - fmu;
    return ratio_transform(r, mu, fmu, value_at_mu, /*skip_first_branch=*/true);
}

BoundaryObject theta_tilde(double mu, double tau, const BoundaryObject& f) {
    if (!(mu < smallest_pole(f)))
        throw DomainViolation("theta_tilde: mu must lie below the smallest pole");
    const int ind = index(f);
    if (ind <= -2) return BoundaryObject::inf(-ind - 2);
    if (ind == -1) return BoundaryObject::constant(-tau);
    const auto& r = f.rational();
    if (!(tau > r(mu))) throw DomainViolation("theta_tilde: tau must exceed f(mu)");
    return ratio_transform(r, mu, tau, -tau, /*skip_first_branch=*/false);
}

std::pair<PolyPair, std::pair<double, double>> theta_hat_polys(double mu, const RationalHN& f) {
    const auto [up, down] = poly_pair(f);
    const double fmu = f(mu);
    const Polynomial num_up = (-fmu) * up - Polynomial({-mu - fmu * fmu, 1.0}) * down;
    const Polynomial num_down = up - fmu * down;
    auto [q_up, r_up] = synthetic_divide(num_up, mu);
    auto [q_down, r_down] = synthetic_divide(num_down, mu);
    return {{q_up, q_down}, {r_up, r_down}};
}

PolyPair theta_tilde_polys(double mu, double tau, const RationalHN& f) {
    const auto [up, down] = poly_pair(f);
    return {tau * up + Polynomial({-mu - tau * tau, 1.0}) * down, (-1.0) * up + tau * down};
}

bool approx_equal(const BoundaryObject& a, const BoundaryObject& b, double tol) {
    if (a.is_rational() != b.is_rational()) return false;
    if (!a.is_rational()) return a.singularity_order() == b.singularity_order();
    const auto& x = a.rational();
    const auto& y = b.rational();
    auto close = [tol](double u, double v) {
        return std::abs(u - v) <= tol * std::max({1.0, std::abs(u), std::abs(v)});
    };
    if (x.pole_count() != y.pole_count()) return false;
    if (!close(x.h0(), y.h0()) || !close(x.h(), y.h())) return false;
    for (int k = 0; k < x.pole_count(); ++k)
        if (!close(x.poles()[k], y.poles()[k]) || !close(x.residues()[k], y.residues()[k]))
            return false;
    return true;
}

bool theta_roundtrip_check(double mu, const BoundaryObject& f, double tol) {
    const BoundaryObject fh = theta_hat(mu, f);
    const double tau = f.is_rational() ? -f.rational()(mu) : 0.0;
    return approx_equal(theta_tilde(mu, tau, fh), f, tol);
}

bool theta_roundtrip_check(double mu, double tau, const BoundaryObject& f, double tol) {
    return approx_equal(theta_hat(mu, theta_tilde(mu, tau, f)), f, tol);
}

}  // namespace dspec
