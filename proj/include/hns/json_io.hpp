#pragma once

#include "hns/analysis.hpp"
#include "hns/families.hpp"
#include "hns/liouville.hpp"
#include "hns/reduced_ode.hpp"

#include "json.hpp"

namespace hns {

/// {"family": "<tag>", "params": {...}}. Unknown or missing fields throw InvalidArgument.
SolutionSpec spec_from_json(const nlohmann::json &j);
nlohmann::json spec_to_json(const SolutionSpec &spec);

/// {"points": [[x, y, z], ...], "exponents": [l1, ...], "basepoint": [re, im]}
/// (basepoint optional). Points are normalized; the rest is left to validate().
SingularityPrescription prescription_from_json(const nlohmann::json &j);
nlohmann::json prescription_to_json(const SingularityPrescription &p);

/// {"f": "power" | "exp" | "exp_power", "params": {...}} with power {alpha, a},
/// exp {a, b}, exp_power {k}; complex numbers as [re, im] or a plain number.
ClosedForm closed_form_from_json(const nlohmann::json &j);

/// Either of the two forms above, told apart by the "f" key.
LiouvilleSolution liouville_from_json(const nlohmann::json &j);

nlohmann::json to_json(const ResidualReport &r);
nlohmann::json to_json(const SingularityReport &r);
nlohmann::json to_json(const GradientReport &r);
nlohmann::json to_json(const GrowthBound &r);
nlohmann::json to_json(const SlopeFit &r);
nlohmann::json to_json(const RegionProbe &r);

} // namespace hns
