#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dspec/analysis.hpp"
#include "dspec/errors.hpp"
#include "test_support.hpp"

using namespace dspec;
using dspec::testing::kPi;

namespace {

Problem dirichlet() { return {Potential::zero(), BoundaryObject::inf(0), BoundaryObject::inf(0)}; }
Problem neumann() { return {Potential::zero(), BoundaryObject::constant(0.0), BoundaryObject::constant(0.0)}; }
Problem bessel1() { return {Potential::zero(), BoundaryObject::inf(1), BoundaryObject::inf(0)}; }

SpectralData first(const SpectralData& d, std::size_t n) {
    SpectralData out = d;
    out.lambdas.resize(n);
    out.gammas.resize(n);
    out.betas.resize(n);
    return out;
}

}  // namespace

TEST_CASE("asymptotic fit") {
    const auto dd = fit_asymptotics(spectral_data(dirichlet(), 40));
    CHECK(dd.L_hat == -1.0);
    CHECK(std::abs(dd.sigma_hat) < 1e-3);
    CHECK(dd.gamma_exponent == doctest::Approx(-2.0).epsilon(0.025));
    CHECK(dd.plateau);

    const auto b = fit_asymptotics(spectral_data(bessel1(), 40));
    CHECK(b.L_hat == -1.5);
    CHECK(b.sigma_hat == doctest::Approx(-1.0 / kPi).epsilon(1e-2));

    CHECK_THROWS_AS((void)fit_asymptotics(spectral_data(dirichlet(), 10)), InsufficientData);
}

TEST_CASE("zero counts") {
    const auto grid = default_grid(dirichlet(), 1025);
    CHECK(count_zeros(eigenfunction_trace(dirichlet(), 1.0, 1.0, grid)) == 0);
    CHECK(count_zeros(eigenfunction_trace(dirichlet(), 16.0, -1.0, grid)) == 3);

    SolutionTrace graze;
    graze.grid = {0.5, 1.0, 1.5};
    graze.y = {1.0, 0.0, 1.0};
    graze.dy = {-1.0, 0.0, 1.0};
    graze.logscale = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)count_zeros(graze), AmbiguousZero);
}

TEST_CASE("oscillation") {
    CHECK(oscillation_check(dirichlet(), spectral_data(dirichlet(), 11)).ok);
    CHECK(oscillation_check(bessel1(), spectral_data(bessel1(), 9)).ok);

    const Problem pole{Potential::cosine(1.0, 2.0), RationalHN(0.0, 0.0, {3.0}, {1.0}), BoundaryObject::constant(0.0)};
    const auto d = spectral_data(pole, 12);
    const auto r = oscillation_check(pole, d);
    CHECK(r.ok);
    CHECK(pole_count_upto(pole.f, d.lambdas.back()) == 1);
    CHECK(r.counted.back() == 10);
}

TEST_CASE("regularized trace") {
    CHECK(std::abs(regularized_trace_series(dirichlet(), 50)) < 1e-3);
    CHECK(std::abs(trace_closed_form(dirichlet())) < 1e-14);
    CHECK(std::abs(regularized_trace_series(neumann(), 50)) < 1e-3);

    const auto r = trace_report(bessel1(), 50);
    CHECK(r.a == -1.5);
    CHECK(r.b == doctest::Approx(-1.0 / (kPi * kPi)));
    CHECK(std::abs(r.series_value - r.closed_form) < 1e-3);

    // rational boundary functions reduce to the simpler expression
    const Problem p{Potential::polynomial({0.5, 0.3}), RationalHN(1.0, 0.5, {2.0}, {0.7}), BoundaryObject::constant(1.0)};
    const Omega w = omega(p.f), W = omega(p.F);
    const double simple = -p.q.value(0.0) / 4 + p.q.value(kPi) / 4 - w.omega1 * w.omega1 / 2 -
                          W.omega1 * W.omega1 / 2 - w.omega2 - W.omega2;
    CHECK(trace_closed_form(p) == doctest::Approx(simple).epsilon(1e-14));
    const auto q = trace_report(p, 50);
    CHECK(std::abs(q.series_value - q.closed_form) < 1e-3);

    const Problem sampled{Potential::zero().sampled(65), BoundaryObject::inf(0), BoundaryObject::inf(0)};
    CHECK_THROWS_AS((void)trace_closed_form(sampled), Unsupported);
}

TEST_CASE("invariant across the hat transform") {
    const auto r = lemma_invariant_check(dirichlet());
    CHECK(r.ok);
    CHECK(std::abs(r.after) < 1e-4);
    CHECK(lemma_invariant_check(neumann()).ok);
    CHECK(lemma_invariant_check({Potential::cosine(1.5, 1.0), BoundaryObject::inf(1), BoundaryObject::constant(0.3)}).ok);
}

TEST_CASE("symmetry") {
    CHECK(symmetric_check(spectral_data(dirichlet(), 8)));
    CHECK_FALSE(symmetric_check(spectral_data({Potential::cosine(1.0, 1.0), BoundaryObject::inf(0), BoundaryObject::inf(0)}, 8)));
    CHECK_FALSE(symmetric_check(spectral_data(bessel1(), 8)));
    CHECK(symmetric_check(spectral_data({Potential::cosine(1.0, 2.0), BoundaryObject::inf(1), BoundaryObject::inf(1)}, 8)));
}

TEST_CASE("data chains") {
    const std::vector<double> l{1.0, 4.0, 9.0, 16.0}, g{0.5, 0.25, 0.125, 0.0625};
    auto [l0, g0] = data_chain(l, g, 0, {}, {});
    CHECK(l0 == l);
    CHECK(g0 == g);

    const std::vector<double> pl{0.0}, pg{1.0};
    auto [l1, g1] = data_chain(l, g, 1, pl, pg);
    REQUIRE(l1.size() == 5);
    CHECK(l1[0] == 0.0);
    CHECK(g1[0] == 1.0);
    for (int n = 1; n < 5; ++n) {
        CHECK(l1[n] == l[n - 1]);
        CHECK(g1[n] == doctest::Approx(g[n - 1] * (l[n - 1] - 0.0)));
    }

    const std::vector<double> pl2{-3.0, -1.0}, pg2{2.0, 0.3};
    auto [l2, g2] = data_chain(l, g, 2, pl2, pg2);
    auto [a, b] = hat_data_map(l2, g2);
    auto [c, d] = hat_data_map(a, b);
    for (std::size_t n = 0; n < l.size(); ++n) {
        CHECK(c[n] == l[n]);
        CHECK(std::abs(d[n] - g[n]) <= 1e-10 * g[n]);
    }

    CHECK_THROWS_AS((void)data_chain(l, g, 1, std::vector<double>{2.0}, pg), DomainViolation);
    CHECK_THROWS_AS((void)data_chain(l, g, 2, std::vector<double>{-1.0, -3.0}, pg2), DomainViolation);
    CHECK_THROWS_AS((void)data_chain(l, g, 1, pl, std::vector<double>{-1.0}), DomainViolation);
}
