#include "dspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dspec/errors.hpp"

namespace dspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Derivative at xs[at] of the interpolating polynomial through the given points.
double lagrange_derivative(std::span<const double> xs, std::span<const double> ys, std::size_t at) {
    const std::size_t n = xs.size();
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // l_j'(x_at)
        double lj = 0.0;
        if (j == at) {
            for (std::size_t m = 0; m < n; ++m)
                if (m != j) lj += 1.0 / (xs[j] - xs[m]);
        } else {
            double prod = 1.0 / (xs[j] - xs[at]);
            for (std::size_t m = 0; m < n; ++m)
                if (m != j && m != at) prod *= (xs[at] - xs[m]) / (xs[j] - xs[m]);
            lj = prod;
        }
        d += ys[j] * lj;
    }
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// SampledPotential: clamped cubic spline, end slopes from the quartic through
// the five outermost samples.

SampledPotential::SampledPotential(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    const std::size_t n = grid_.size();
    if (n < 9) throw DomainViolation("sampled potential needs at least 9 points");
    if (values_.size() != n) throw DomainViolation("grid and values differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]))
            throw DomainViolation("sampled potential must be finite");
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw DomainViolation("sampled grid must be strictly increasing");
    }
    if (grid_.front() < 0.0 || grid_.back() > kPi + 1e-12)
        throw DomainViolation("sampled grid must lie in [0, pi]");

    const std::span<const double> xs(grid_), ys(values_);
    const double s0 = lagrange_derivative(xs.first(5), ys.first(5), 0);
    const double sn = lagrange_derivative(xs.last(5), ys.last(5), 4);

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = grid_[i + 1] - grid_[i];

    // Tridiagonal system for the second derivatives (Thomas algorithm).
    std::vector<double> a(n), b(n), c(n), r(n);
    b[0] = 2.0 * h[0];
    c[0] = h[0];
    r[0] = 6.0 * ((values_[1] - values_[0]) / h[0] - s0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a[i] = h[i - 1];
        b[i] = 2.0 * (h[i - 1] + h[i]);
        c[i] = h[i];
        r[i] = 6.0 * ((values_[i + 1] - values_[i]) / h[i] - (values_[i] - values_[i - 1]) / h[i - 1]);
    }
    a[n - 1] = h[n - 2];
    b[n - 1] = 2.0 * h[n - 2];
    r[n - 1] = 6.0 * (sn - (values_[n - 1] - values_[n - 2]) / h[n - 2]);

    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    second_.assign(n, 0.0);
    second_[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) second_[i] = (r[i] - c[i] * second_[i + 1]) / b[i];

    step_ = (grid_.back() - grid_.front()) / static_cast<double>(n - 1);
    uniform_ = true;
    for (std::size_t i = 0; i < n && uniform_; ++i)
        uniform_ = std::abs(grid_[i] - (grid_.front() + step_ * static_cast<double>(i))) <= 1e-12;
}

std::size_t SampledPotential::locate(double x) const {
    const std::size_t last = grid_.size() - 2;
    if (uniform_) {
        const double t = (x - grid_.front()) / step_;
        if (t <= 0.0) return 0;
        return std::min(last, static_cast<std::size_t>(t));
    }
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return 0;
    return std::min(last, static_cast<std::size_t>(it - grid_.begin() - 1));
}

double SampledPotential::operator()(double x) const {
    const std::size_t i = locate(x);
    const double x0 = grid_[i], x1 = grid_[i + 1];
    const double h = x1 - x0;
    const double A = x1 - x, B = x - x0;
    return second_[i] * A * A * A / (6.0 * h) + second_[i + 1] * B * B * B / (6.0 * h) +
           (values_[i] / h - second_[i] * h / 6.0) * A + (values_[i + 1] / h - second_[i + 1] * h / 6.0) * B;
}

double SampledPotential::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double h = grid_[i + 1] - grid_[i];
        s += 0.5 * h * (values_[i] + values_[i + 1]) - h * h * h * (second_[i] + second_[i + 1]) / 24.0;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Potential

Potential Potential::constant(double c) {
    AnalyticPotential a;
    a.kind = AnalyticPotential::Kind::Constant;
    a.constant = c;
    return Potential(a);
}

Potential Potential::cosine(double amplitude, double k) {
    AnalyticPotential a;
    a.kind = AnalyticPotential::Kind::Cosine;
    a.amplitude = amplitude;
    a.wavenumber = k;
    return Potential(a);
}

Potential Potential::polynomial(std::vector<double> coeffs) {
    AnalyticPotential a;
    a.kind = AnalyticPotential::Kind::Polynomial;
    a.coeffs = std::move(coeffs);
    return Potential(a);
}

Potential Potential::sampled(std::size_t n) const {
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = kPi * static_cast<double>(i) / static_cast<double>(n - 1);
        ys[i] = value(xs[i]);
    }
    return Potential(SampledPotential(std::move(xs), std::move(ys)));
}

const AnalyticPotential& Potential::analytic() const {
    if (!is_analytic()) throw Unsupported("potential is sampled, not analytic");
    return std::get<AnalyticPotential>(value_);
}

const SampledPotential& Potential::samples() const {
    if (is_analytic()) throw Unsupported("potential is analytic, not sampled");
    return std::get<SampledPotential>(value_);
}

double Potential::value(double x) const {
    if (!is_analytic()) return std::get<SampledPotential>(value_)(x);
    const auto& a = std::get<AnalyticPotential>(value_);
    switch (a.kind) {
        case AnalyticPotential::Kind::Zero: return 0.0;
        case AnalyticPotential::Kind::Constant: return a.constant;
        case AnalyticPotential::Kind::Cosine: return a.amplitude * std::cos(a.wavenumber * x);
        case AnalyticPotential::Kind::Polynomial: {
            double acc = 0.0;
            for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) acc = acc * x + *it;
            return acc;
        }
    }
    return 0.0;
}

double Potential::integral() const {
    if (!is_analytic()) return std::get<SampledPotential>(value_).integral();
    const auto& a = std::get<AnalyticPotential>(value_);
    switch (a.kind) {
        case AnalyticPotential::Kind::Zero: return 0.0;
        case AnalyticPotential::Kind::Constant: return a.constant * kPi;
        case AnalyticPotential::Kind::Cosine:
            if (a.wavenumber == 0.0) return a.amplitude * kPi;
            return a.amplitude * std::sin(a.wavenumber * kPi) / a.wavenumber;
        case AnalyticPotential::Kind::Polynomial: {
            double s = 0.0;
            for (std::size_t j = 0; j < a.coeffs.size(); ++j)
                s += a.coeffs[j] * std::pow(kPi, static_cast<double>(j + 1)) / static_cast<double>(j + 1);
            return s;
        }
    }
    return 0.0;
}

double eval_q(const Potential& p, double x) {
    if (!(x > 0.0 && x < kPi)) throw OutOfDomain("q evaluated outside (0, pi)");
    return p.value(x);
}

bool symmetrize_check(const Potential& p, double tol) {
    constexpr int n = 257;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = kPi * i / (n - 1);
        worst = std::max(worst, std::abs(p.value(x) - p.value(kPi - x)));
    }
    return worst <= tol;
}

}  // namespace dspec
