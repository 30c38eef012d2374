// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dspec/analysis.hpp"
#include "dspec/errors.hpp"
#include "../test_support.hpp"

using namespace dspec;

namespace {

using testing::kPi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

struct Preset {
    const char* name;
    Problem problem;
};

Problem dirichlet_zero() { return {Potential::zero(), BoundaryObject::inf(0), BoundaryObject::inf(0)}; }
Problem neumann_zero() { return {Potential::zero(), BoundaryObject::constant(0.0), BoundaryObject::constant(0.0)}; }
Problem bessel_l1() { return {Potential::zero(), BoundaryObject::inf(1), BoundaryObject::inf(0)}; }

std::vector<Preset> presets() {
    return {
        {"dirichlet_zero", dirichlet_zero()},
        {"bessel_l1", bessel_l1()},
        {"pole_left", {Potential::cosine(1.0, 2.0), RationalHN(0.0, 0.0, {3.0}, {1.0}), BoundaryObject::constant(0.0)}},
        {"singular_cosine", {Potential::cosine(2.0, 1.0), BoundaryObject::inf(2), BoundaryObject::constant(0.5)}},
        {"linear_left", {Potential::polynomial({0.5, 0.3}), RationalHN(1.0, 0.5), BoundaryObject::constant(1.0)}},
        {"neumann_cosine", {Potential::cosine(1.0, 1.0), BoundaryObject::constant(0.0), BoundaryObject::constant(0.0)}},
    };
}

// k-th positive root of tan s = s by bisection of sin s - s cos s on (k pi, k pi + pi/2).
double tan_root(int k) {
    double a = k * kPi + 1e-9, b = k * kPi + kPi / 2 - 1e-9;
    auto g = [](double s) { return std::sin(s) - s * std::cos(s); };
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        ((g(a) < 0) == (g(m) < 0) ? a : b) = m;
    }
    return 0.5 * (a + b);
}

bool same_boundary(const BoundaryObject& a, const BoundaryObject& b, double tol, double& err) {
    if (a.is_rational() != b.is_rational()) return false;
    if (!a.is_rational()) return a.singularity_order() == b.singularity_order();
    const auto& x = a.rational();
    const auto& y = b.rational();
    if (x.pole_count() != y.pole_count()) return false;
    auto upd = [&](double u, double v) { err = std::max(err, std::abs(u - v) / std::max(1.0, std::abs(u))); };
    upd(x.h0(), y.h0());
    upd(x.h(), y.h());
    for (int k = 0; k < x.pole_count(); ++k) {
        upd(x.poles()[k], y.poles()[k]);
        upd(x.residues()[k], y.residues()[k]);
    }
    return err <= tol;
}

Outcome closed_form_spectra() {
    const auto d = spectral_data(dirichlet_zero(), 21);
    double el = 0, eg = 0, eb = 0;
    for (int n = 0; n <= 20; ++n) {
        const double k = n + 1.0;
        el = std::max(el, rel(d.lambdas[n], k * k));
        eg = std::max(eg, std::abs(d.gammas[n] - kPi / (2 * k * k)) / (kPi / (2 * k * k)));
        eb = std::max(eb, std::abs(d.betas[n] - (n % 2 == 0 ? 1.0 : -1.0)));
    }
    const auto m = spectral_data(neumann_zero(), 21);
    double nl = std::abs(m.lambdas[0]), ng = std::abs(m.gammas[0] - kPi) / kPi;
    for (int n = 1; n <= 20; ++n) {
        nl = std::max(nl, rel(m.lambdas[n], n * n));
        ng = std::max(ng, std::abs(m.gammas[n] - kPi / 2) / (kPi / 2));
    }
    const double worst = std::max({el, eg, eb, nl, ng});
    return {worst <= 1e-6, fmt("max rel err: Dirichlet lambda %.1e gamma %.1e beta %.1e, Neumann lambda %.1e gamma %.1e",
                               el, eg, eb, nl, ng)};
}

Outcome bessel_oracle() {
    const auto l = eigenvalues(bessel_l1(), 11);
    double e = 0;
    for (int n = 0; n <= 10; ++n) {
        const double want = tan_root(n + 1);
        e = std::max(e, std::abs(std::sqrt(l[n]) * kPi - want) / want);
    }
    return {e <= 1e-7, fmt("max rel err of pi sqrt(lambda_n) vs tan s = s roots, n<=10: %.2e", e)};
}

Outcome spectral_shift() {
    double el = 0, eg = 0;
    std::string names;
    const auto ps = presets();
    for (int i = 0; i < 5; ++i) {
        const Problem& p = ps[i].problem;
        const auto base = spectral_data(p, 12);
        const auto h = t_hat(p);
        const auto d = spectral_data(h.problem, 11);
        for (int n = 0; n <= 10; ++n) {
            el = std::max(el, rel(d.lambdas[n], base.lambdas[n + 1]));
            eg = std::max(eg, std::abs(d.gammas[n] * (base.lambdas[n + 1] - base.lambdas[0]) - base.gammas[n + 1]) /
                                  base.gammas[n + 1]);
        }
        names += std::string(i ? "," : "") + ps[i].name;
    }
    return {el <= 1e-5 && eg <= 1e-4,
            fmt("5 presets (%s): shifted spectrum rel err %.2e, gamma relation rel err %.2e", names.c_str(), el, eg)};
}

Outcome darboux_potential() {
    const auto h = t_hat(dirichlet_zero());
    double e = 0;
    for (double x : retained_grid()) {
        const double s = std::sin(x);
        e = std::max(e, std::abs(h.problem.q.value(x) - (2 / (s * s) - 2 / (x * x) - 2 / ((kPi - x) * (kPi - x)))));
    }
    const bool sym = h.problem.f.singularity_order() == 1 && h.problem.F.singularity_order() == 1;
    return {e <= 1e-6 && sym, fmt("sup err on retained grid %.2e, boundary objects inf_%d, inf_%d", e,
                                  h.problem.f.singularity_order(), h.problem.F.singularity_order())};
}

Problem random_problem(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    Potential q;
    switch (pick(3)) {
        case 0: q = Potential::cosine(-2.0 + 4.0 * u(rng), 1.0 + pick(3)); break;
        case 1: q = Potential::polynomial({-1.0 + 2.0 * u(rng), -0.5 + u(rng)}); break;
        default: q = Potential::constant(-1.0 + 2.0 * u(rng)); break;
    }
    auto boundary = [&]() -> BoundaryObject {
        switch (pick(6)) {
            case 0: return BoundaryObject::inf(0);
            case 1: return BoundaryObject::inf(1);
            case 2: return BoundaryObject::inf(2);
            case 3: return BoundaryObject::constant(-2.0 + 4.0 * u(rng));
            case 4: return RationalHN(0.5 + 1.5 * u(rng), -1.0 + 2.0 * u(rng));
            default: return RationalHN(0.0, -1.0 + 2.0 * u(rng), {2.0 + 4.0 * u(rng)}, {0.3 + u(rng)});
        }
    };
    return {q, boundary(), boundary()};
}

Outcome inverse_round_trips() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double eq = 0, ec = 0;
    bool symbols = true;
    for (int i = 0; i < 10; ++i) {
        const Problem p = random_problem(rng);
        const auto h = t_hat(p);
        const auto back = t_tilde(h.mu, h.nu, h.problem);
        eq = std::max(eq, retained_distance(back.problem.q, p.q));
        symbols = same_boundary(back.problem.f, p.f, 1e-8, ec) && symbols;
        symbols = same_boundary(back.problem.F, p.F, 1e-8, ec) && symbols;

        const double mu = h.mu - 0.3 - 1.7 * u(rng);
        const double nu = h.nu * (0.5 + 1.5 * u(rng));
        const auto t = t_tilde(mu, nu, p);
        const auto again = t_hat(t.problem);
        eq = std::max(eq, retained_distance(again.problem.q, p.q));
        symbols = same_boundary(again.problem.f, p.f, 1e-8, ec) && symbols;
        symbols = same_boundary(again.problem.F, p.F, 1e-8, ec) && symbols;
    }
    return {eq <= 1e-5 && ec <= 1e-8 && symbols,
            fmt("10 random instances, both directions: q sup err %.2e, coefficient err %.2e, symbols %s", eq, ec,
                symbols ? "exact" : "MISMATCH")};
}

bool interlace(std::vector<double> a, const std::vector<double>& b) {
    std::vector<std::pair<double, int>> m;
    for (double x : a) m.emplace_back(x, 0);
    for (double x : b) m.emplace_back(x, 1);
    std::sort(m.begin(), m.end());
    for (std::size_t k = 1; k < m.size(); ++k)
        if (m[k].second == m[k - 1].second) return false;
    return true;
}

Outcome theta_algebra() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0, interlaced = 0;
    for (int i = 0; i < 1000; ++i) {
        const BoundaryObject f = testing::random_boundary(rng, 3);
        const double mu = std::min(smallest_pole(f), 6.0) - 0.05 - 4.0 * u(rng);
        const double tau = f.is_rational() ? f.rational()(mu) + 0.05 + 3.0 * u(rng) : -3.0 + 6.0 * u(rng);
        const auto fh = theta_hat(mu, f);
        const auto ft = theta_tilde(mu, tau, f);
        bool ok = theta_roundtrip_check(mu, f, 1e-10) && theta_roundtrip_check(mu, tau, f, 1e-10);
        ok = ok && index(fh) == index(f) - 1 && index(ft) == index(f) + 1;
        if (index(f) >= 3) {
            ok = ok && smallest_pole(f) < smallest_pole(fh) && interlace(f.rational().poles(), fh.rational().poles());
            ++interlaced;
        }
        if (index(f) >= 2)
            ok = ok && smallest_pole(f) > smallest_pole(ft) && interlace(f.rational().poles(), ft.rational().poles());
        if (!ok) ++failures;
    }
    return {failures == 0, fmt("1000 random cases, %d failures (%d with interlacing of hat poles)", failures, interlaced)};
}

Outcome oscillation() {
    int bad = 0, max_pi = 0;
    std::string names;
    for (const auto& ps : presets()) {
        const auto d = spectral_data(ps.problem, 16);
        const auto r = oscillation_check(ps.problem, d);
        if (!r.ok) {
            ++bad;
            names += std::string(" ") + ps.name;
        }
        for (double l : d.lambdas) max_pi = std::max(max_pi, pole_count_upto(ps.problem.f, l));
    }
    return {bad == 0 && max_pi >= 1,
            fmt("6 presets, n<=15: %d mismatching%s; largest Pi_f(lambda_n) = %d", bad, names.c_str(), max_pi)};
}

Outcome asymptotics() {
    bool ok = true;
    double es = 0, eg = 0;
    std::string worst;
    for (const auto& ps : presets()) {
        const auto d = spectral_data(ps.problem, 60);
        const auto fit = fit_asymptotics(d);
        const bool this_ok = fit.L_hat == half_index(ps.problem) && std::abs(fit.sigma_hat - sigma(ps.problem)) <= 1e-2 &&
                             std::abs(fit.gamma_exponent - 2.0 * d.ind_f) <= 0.05 && fit.plateau;
        if (!this_ok) worst += std::string(" ") + ps.name;
        ok = ok && this_ok;
        es = std::max(es, std::abs(fit.sigma_hat - sigma(ps.problem)));
        eg = std::max(eg, std::abs(fit.gamma_exponent - 2.0 * d.ind_f));
    }
    return {ok, fmt("6 presets, 60 eigenvalues: L exact, sigma err %.2e, gamma exponent err %.3f%s%s", es, eg,
                    worst.empty() ? "" : "; failing:", worst.c_str())};
}

Outcome trace() {
    const auto ps = presets();
    double et = 0, ei = 0;
    std::string as;
    for (int i : {3, 5, 4, 2}) {
        const auto r = trace_report(ps[i].problem, 50);
        et = std::max(et, std::abs(r.series_value - r.closed_form));
        as += fmt(" %s(a=%g)", ps[i].name, r.a);
    }
    for (const auto& p : ps) {
        const auto r = lemma_invariant_check(p.problem);
        ei = std::max(ei, std::abs(r.before - r.after));
    }
    return {et <= 1e-3 && ei <= 1e-4,
            fmt("series vs closed form max diff %.2e on%s; invariant across hat max diff %.2e", et, as.c_str(), ei)};
}

Outcome product() {
    double e = 0;
    for (const Problem& p : {dirichlet_zero(), bessel_l1()}) {
        const auto l = eigenvalues(p, 201);
        for (double lam : {l[0] - 1.0, 0.5 * (l[0] + l[1]), 0.5 * (l[2] + l[3])}) {
            const double r = product_representation(l, half_index(p), sigma(p) / kPi, lam) / char_function(p, lam).value();
            e = std::max(e, std::abs(r - 1.0));
        }
    }
    return {e <= 0.01, fmt("L = -1 and L = -3/2, 200 eigenvalues, 3 points each: max |ratio - 1| = %.2e", e)};
}

Outcome data_chains() {
    const Problem p = presets()[3].problem;
    const auto d = spectral_data(p, 60);
    const int K = 2;
    const std::vector<double> pl{d.lambdas[0] - 3.0, d.lambdas[0] - 1.0}, pg{0.7, 1.9};
    const auto [l, g] = data_chain(d.lambdas, d.gammas, K, pl, pg);
    SpectralData shifted{l, g, std::vector<double>(l.size(), 1.0), d.ind_f + K, d.ind_F + K};
    const auto fit = fit_asymptotics(shifted);
    const bool fit_ok = fit.L_hat == half_index(p) + K && std::abs(fit.sigma_hat - sigma(p)) <= 1e-2 &&
                        std::abs(fit.gamma_exponent - 2.0 * shifted.ind_f) <= 0.05 && fit.plateau;
    std::vector<double> bl = l, bg = g;
    for (int k = 0; k < K; ++k) std::tie(bl, bg) = hat_data_map(bl, bg);
    double e = 0;
    for (std::size_t n = 0; n < d.lambdas.size(); ++n)
        e = std::max({e, std::abs(bl[n] - d.lambdas[n]) / std::abs(d.lambdas[n]), std::abs(bg[n] - d.gammas[n]) / d.gammas[n]});
    return {fit_ok && e <= 1e-10, fmt("K=2 on singular_cosine: fitted L %g (want %g), sigma err %.1e, gamma exponent %.3f "
                                      "(want %d); K-fold hat map rel err %.1e",
                                      fit.L_hat, half_index(p) + K, std::abs(fit.sigma_hat - sigma(p)),
                                      fit.gamma_exponent, 2 * shifted.ind_f, e)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds, 0 for none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "closed-form spectra", 5.0, closed_form_spectra},
        {2, "Bessel oracle", 10.0, bessel_oracle},
        {3, "spectral shift under hat", 0.0, spectral_shift},
        {4, "explicit Darboux potential", 0.0, darboux_potential},
        {5, "inverse round trips", 0.0, inverse_round_trips},
        {6, "Theta algebra", 1.0, theta_algebra},
        {7, "oscillation", 0.0, oscillation},
        {8, "asymptotics", 0.0, asymptotics},
        {9, "regularized trace", 0.0, trace},
        {10, "product representation", 0.0, product},
        {11, "data chains", 0.0, data_chains},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const Error& e) {
            o = {false, std::string(e.kind()) + ": " + e.what()};
        } catch (const std::exception& e) {
            o = {false, e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0.0 && secs > c.budget) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget);
        }
        if (!o.pass) ++failed;
        std::printf("%s %2d %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
