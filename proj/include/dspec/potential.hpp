#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dspec {

/// Closed-form potential presets.
struct AnalyticPotential {
    enum class Kind { Zero, Constant, Cosine, Polynomial };
    Kind kind = Kind::Zero;
    double constant = 0.0;           // Constant
    double amplitude = 0.0;          // Cosine: amplitude * cos(k x)
    double wavenumber = 0.0;
    std::vector<double> coeffs;      // Polynomial, ascending degree
};

/// Cubic spline through samples on [grid.front(), grid.back()].
class SampledPotential {
public:
    SampledPotential(std::vector<double> grid, std::vector<double> values);

    [[nodiscard]] const std::vector<double>& grid() const { return grid_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double integral() const;

private:
    std::size_t locate(double x) const;

    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> second_;  // spline second derivatives at the nodes
    bool uniform_ = false;
    double step_ = 0.0;
};

/// Regular part q of the potential, square integrable on (0, pi).
class Potential {
public:
    Potential() : value_(AnalyticPotential{}) {}
    Potential(AnalyticPotential a) : value_(std::move(a)) {}
    Potential(SampledPotential s) : value_(std::move(s)) {}

    static Potential zero() { return Potential(); }
    static Potential constant(double c);
    static Potential cosine(double amplitude, double k);
    static Potential polynomial(std::vector<double> coeffs);
    /// Samples `this` on n uniform points of [0, pi].
    [[nodiscard]] Potential sampled(std::size_t n) const;

    [[nodiscard]] bool is_analytic() const { return std::holds_alternative<AnalyticPotential>(value_); }
    [[nodiscard]] const AnalyticPotential& analytic() const;
    [[nodiscard]] const SampledPotential& samples() const;

    /// Value on the closed interval [0, pi]; no domain check.
    [[nodiscard]] double value(double x) const;
    /// Integral over (0, pi).
    [[nodiscard]] double integral() const;

private:
    std::variant<AnalyticPotential, SampledPotential> value_;
};

/// Checked evaluation on the open interval (0, pi); throws OutOfDomain otherwise.
[[nodiscard]] double eval_q(const Potential& p, double x);

/// True iff max |q(x) - q(pi - x)| over 257 uniform points of [0, pi] is at most tol.
[[nodiscard]] bool symmetrize_check(const Potential& p, double tol);

}  // namespace dspec
