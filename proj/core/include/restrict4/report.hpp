#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "restrict4/adapt.hpp"
#include "restrict4/newton.hpp"
#include "restrict4/oscint.hpp"
#include "restrict4/rational.hpp"
#include "restrict4/restrict.hpp"

namespace restrict4 {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "restrict4/1";

/// Reals are written with 12 significant digits; non-finite values as null.
Json real(double v);
std::string real_text(double v);

Json to_json(const Rational& r);
Json to_json(const Exponent& k);

Json polyhedron_json(const NewtonPolyhedron& np, const DistanceResult& dist);
Json height_json(const HeightResult& h);
Json exponents_json(const ExponentReport& e);
Json decay_json(const DecayFit& fit);
Json knapp_family_json(const KnappFamily& fam);
Json knapp_json(const KnappReport& r);

/// One row per sample: dir, xi1..xi4, abs_xi, re_j, im_j, abs_j, panels, status.
std::string decay_csv(const DecayFit& fit);
/// delta, lhs, rhs, ratio, predicted_exponent.
std::string knapp_csv(const KnappReport& r);

}  // namespace restrict4
