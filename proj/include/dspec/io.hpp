#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "dspec/analysis.hpp"

namespace dspec {

using Json = nlohmann::ordered_json;

/// {"kind":"hn","h0":..,"h":..,"poles":[..],"residues":[..]} or {"kind":"inf","n":..}
[[nodiscard]] Json to_json(const BoundaryObject& f);
[[nodiscard]] BoundaryObject boundary_from_json(const Json& j);

/// {"kind":"preset","name":..,"params":{..}} or {"kind":"sampled","grid":[..],"values":[..]}
[[nodiscard]] Json to_json(const Potential& q);
[[nodiscard]] Potential potential_from_json(const Json& j);

/// {"q":..,"f":..,"F":..}
[[nodiscard]] Json to_json(const Problem& p);
[[nodiscard]] Problem problem_from_json(const Json& j);

[[nodiscard]] Json to_json(const SpectralData& d);
[[nodiscard]] Json to_json(const AsymptoticsFit& fit);
[[nodiscard]] Json to_json(const TraceReport& r);
[[nodiscard]] Json to_json(const ChainStep& s);

/// CSV with header n,lambda,beta,gamma.
void write_spectral_csv(std::ostream& os, const SpectralData& d);

/// Deterministic text form: two-space indent, trailing newline.
[[nodiscard]] std::string dump(const Json& j);

}  // namespace dspec
