#include "dspec/io.hpp"

#include <cstdio>
#include <ostream>

#include "dspec/errors.hpp"

namespace dspec {
namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
    }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
    return j.is_object() && j.contains(key) ? field<T>(j, key) : fallback;
}

// Library precondition failures inside a config become config errors.
template <class Fn>
auto checked(Fn&& fn) {
    try {
        return fn();
    } catch (const DomainViolation& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

Json to_json(const BoundaryObject& f) {
    Json j;
    if (!f.is_rational()) {
        j["kind"] = "inf";
        j["n"] = f.singularity_order();
        return j;
    }
    const auto& r = f.rational();
    j["kind"] = "hn";
    j["h0"] = r.h0();
    j["h"] = r.h();
    j["poles"] = r.poles();
    j["residues"] = r.residues();
    return j;
}

BoundaryObject boundary_from_json(const Json& j) {
    const auto kind = field<std::string>(j, "kind");
    if (kind == "inf") {
        const int n = field<int>(j, "n");
        return checked([&] { return BoundaryObject::inf(n); });
    }
    if (kind == "hn") {
        const auto h0 = field_or<double>(j, "h0", 0.0);
        const auto h = field_or<double>(j, "h", 0.0);
        auto poles = field_or<std::vector<double>>(j, "poles", {});
        auto res = field_or<std::vector<double>>(j, "residues", {});
        return checked([&] { return BoundaryObject(RationalHN(h0, h, poles, res)); });
    }
    throw ConfigError("unknown boundary kind \"" + kind + "\"");
}

Json to_json(const Potential& q) {
    Json j;
    if (!q.is_analytic()) {
        j["kind"] = "sampled";
        j["grid"] = q.samples().grid();
        j["values"] = q.samples().values();
        return j;
    }
    const auto& a = q.analytic();
    j["kind"] = "preset";
    Json params = Json::object();
    switch (a.kind) {
        case AnalyticPotential::Kind::Zero:
            j["name"] = "zero";
            break;
        case AnalyticPotential::Kind::Constant:
            j["name"] = "constant";
            params["c"] = a.constant;
            break;
        case AnalyticPotential::Kind::Cosine:
            j["name"] = "cosine";
            params["amplitude"] = a.amplitude;
            params["k"] = a.wavenumber;
            break;
        case AnalyticPotential::Kind::Polynomial:
            j["name"] = "polynomial";
            params["coeffs"] = a.coeffs;
            break;
    }
    j["params"] = params;
    return j;
}

Potential potential_from_json(const Json& j) {
    const auto kind = field<std::string>(j, "kind");
    if (kind == "sampled") {
        auto grid = field<std::vector<double>>(j, "grid");
        auto values = field<std::vector<double>>(j, "values");
        return checked([&] { return Potential(SampledPotential(grid, values)); });
    }
    if (kind != "preset") throw ConfigError("unknown potential kind \"" + kind + "\"");
    const auto name = field<std::string>(j, "name");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (name == "zero") return Potential::zero();
    if (name == "constant") return Potential::constant(field<double>(params, "c"));
    if (name == "cosine") return Potential::cosine(field<double>(params, "amplitude"), field<double>(params, "k"));
    if (name == "polynomial") return Potential::polynomial(field<std::vector<double>>(params, "coeffs"));
    throw ConfigError("unknown potential preset \"" + name + "\"");
}

Json to_json(const Problem& p) {
    Json j;
    j["q"] = to_json(p.q);
    j["f"] = to_json(p.f);
    j["F"] = to_json(p.F);
    return j;
}

Problem problem_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("problem must be an object");
    Problem p;
    p.q = j.contains("q") ? potential_from_json(j.at("q")) : Potential::zero();
    if (!j.contains("f") || !j.contains("F")) throw ConfigError("problem needs boundary objects \"f\" and \"F\"");
    p.f = boundary_from_json(j.at("f"));
    p.F = boundary_from_json(j.at("F"));
    return p;
}

Json to_json(const SpectralData& d) {
    Json j;
    j["ind_f"] = d.ind_f;
    j["ind_F"] = d.ind_F;
    Json rows = Json::array();
    for (std::size_t n = 0; n < d.lambdas.size(); ++n) {
        Json r;
        r["n"] = n;
        r["lambda"] = d.lambdas[n];
        r["beta"] = n < d.betas.size() ? Json(d.betas[n]) : Json();
        r["gamma"] = n < d.gammas.size() ? Json(d.gammas[n]) : Json();
        rows.push_back(r);
    }
    j["eigenvalues"] = rows;
    return j;
}

Json to_json(const AsymptoticsFit& fit) {
    Json j;
    j["L_hat"] = fit.L_hat;
    j["sigma_hat"] = fit.sigma_hat;
    j["gamma_exponent"] = fit.gamma_exponent;
    j["residual_sq_partial_sums"] = fit.residual_sq_partial_sums;
    j["plateau"] = fit.plateau;
    return j;
}

Json to_json(const TraceReport& r) {
    Json j;
    j["series_value"] = r.series_value;
    j["closed_form"] = r.closed_form;
    j["a"] = r.a;
    j["b"] = r.b;
    return j;
}

Json to_json(const ChainStep& s) {
    Json j;
    j["direction"] = s.direction == Direction::Hat ? "hat" : "tilde";
    j["mu"] = s.mu;
    j["nu"] = s.nu;
    return j;
}

void write_spectral_csv(std::ostream& os, const SpectralData& d) {
    os << "n,lambda,beta,gamma\n";
    char buf[128];
    for (std::size_t n = 0; n < d.lambdas.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", n, d.lambdas[n], d.betas[n], d.gammas[n]);
        os << buf;
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dspec
