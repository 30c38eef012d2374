#pragma once

#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace dspec {

/// Real polynomial, coefficients in ascending degree.
struct Polynomial {
    std::vector<double> coeffs;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {}

    [[nodiscard]] int degree() const;
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Polynomial derivative() const;
    [[nodiscard]] bool is_zero() const;
    /// Largest coefficient magnitude; used to judge remainders relative to scale.
    [[nodiscard]] double scale() const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& p);

/// Division by (x - root). Returns quotient and remainder p(root).
std::pair<Polynomial, double> synthetic_divide(const Polynomial& p, double root);

/// Numerator/denominator pair with f = up / down off the poles.
struct PolyPair {
    Polynomial up;
    Polynomial down;
};

/// Rational Herglotz-Nevanlinna function
///   f(l) = h0 l + h + sum_k residues[k] / (poles[k] - l)
/// with h0 >= 0, residues > 0 and strictly increasing poles.
class RationalHN {
public:
    RationalHN(double h0, double h, std::vector<double> poles = {},
               std::vector<double> residues = {});

    static RationalHN constant(double h) { return RationalHN(0.0, h); }

    [[nodiscard]] double h0() const { return h0_; }
    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] const std::vector<double>& poles() const { return poles_; }
    [[nodiscard]] const std::vector<double>& residues() const { return residues_; }
    [[nodiscard]] int pole_count() const { return static_cast<int>(poles_.size()); }

    /// Throws PoleEvaluation when lambda sits on a pole.
    [[nodiscard]] double operator()(double lambda) const;
    [[nodiscard]] double derivative(double lambda) const;

private:
    double h0_;
    double h_;
    std::vector<double> poles_;
    std::vector<double> residues_;
};

/// The symbol infinity_n: Dirichlet condition for n = 0, inverse square
/// singularity n(n+1)/x^2 otherwise.
struct Singularity {
    int n = 0;
};

/// Element of the set of boundary objects: a rational HN function or a singularity symbol.
class BoundaryObject {
public:
    BoundaryObject(RationalHN f) : value_(std::move(f)) {}
    BoundaryObject(Singularity s);

    static BoundaryObject inf(int n) { return BoundaryObject(Singularity{n}); }
    static BoundaryObject constant(double h) { return BoundaryObject(RationalHN::constant(h)); }

    [[nodiscard]] bool is_rational() const { return std::holds_alternative<RationalHN>(value_); }
    [[nodiscard]] const RationalHN& rational() const;
    [[nodiscard]] int singularity_order() const;

private:
    std::variant<RationalHN, Singularity> value_;
};

[[nodiscard]] int index(const BoundaryObject& f);
[[nodiscard]] int ell(const BoundaryObject& f);
[[nodiscard]] double evaluate(const RationalHN& f, double lambda);
[[nodiscard]] PolyPair poly_pair(const RationalHN& f);

/// Polynomials feeding the regular-endpoint initial data phi(0) = down, phi'(0) = -up.
/// Defined for rational f and for the Dirichlet symbol (up = -1, down = 0).
[[nodiscard]] PolyPair boundary_polys(const BoundaryObject& f);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smallest finite pole, +inf when there is none.
[[nodiscard]] double smallest_pole(const BoundaryObject& f);
/// Number of finite poles not exceeding lambda.
[[nodiscard]] int pole_count_upto(const BoundaryObject& f, double lambda);

struct Omega {
    double omega1;
    double omega2;
};
[[nodiscard]] Omega omega(const BoundaryObject& f);

/// Lowers the index by one. Requires mu < smallest_pole(f).
[[nodiscard]] BoundaryObject theta_hat(double mu, const BoundaryObject& f);
/// Raises the index by one. Requires mu < smallest_pole(f) and, for index >= 0, tau > f(mu).
[[nodiscard]] BoundaryObject theta_tilde(double mu, double tau, const BoundaryObject& f);

/// Numerator/denominator of theta_hat(mu, f) obtained from the polynomials of f
/// by exact division by (l - mu). The second member holds the two division
/// remainders (up, down), which vanish in exact arithmetic.
[[nodiscard]] std::pair<PolyPair, std::pair<double, double>>
theta_hat_polys(double mu, const RationalHN& f);
[[nodiscard]] PolyPair theta_tilde_polys(double mu, double tau, const RationalHN& f);

/// Componentwise comparison; symbols compare exactly.
[[nodiscard]] bool approx_equal(const BoundaryObject& a, const BoundaryObject& b,
                                double tol = 1e-10);

/// theta_tilde(mu, -f(mu), theta_hat(mu, f)) == f
[[nodiscard]] bool theta_roundtrip_check(double mu, const BoundaryObject& f, double tol = 1e-12);
/// theta_hat(mu, theta_tilde(mu, tau, f)) == f
[[nodiscard]] bool theta_roundtrip_check(double mu, double tau, const BoundaryObject& f,
                                         double tol = 1e-12);

}  // namespace dspec
