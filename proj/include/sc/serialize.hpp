#pragma once

#include <json.hpp>
#include <map>
#include <string>

#include "sc/protocol.hpp"

namespace sc {

using json = nlohmann::json;

// Complex numbers serialize as [re, im]; matrices as nested row arrays.
json matrix_to_json(const complex_matrix& m);
complex_matrix matrix_from_json(const json& j);

json density_to_json(const density_operator& rho);
density_operator density_from_json(const json& j);

// {"probs":[...], "states":[matrix,...]}
json ensemble_to_json(const ensemble& e);
ensemble ensemble_from_json(const json& j);

json povm_to_json(const povm& p);
povm povm_from_json(const json& j);

json channel_to_json(const kraus_channel& ch);

// A channel plus the family/parameter metadata it was built from (named
// constructions keep their parameters so tools can, e.g., scan a family).
struct channel_spec {
    kraus_channel channel;
    std::string family;  // kraus | measure_prepare | identity | depolarizing | ...
    std::map<std::string, double> params;
};

channel_spec channel_from_json(const json& j);
// "name:params" shorthand (depolarizing:0.25, identity:2, bsc:0.1,
// replacement:2, dephasing:0.5, bit) or a path to a channel JSON file
channel_spec parse_channel_arg(const std::string& arg);

json protocol_to_json(const feedback_protocol& p);
feedback_protocol protocol_from_json(const json& j);

json exponent_curve_to_json(const exponent_curve& c);
std::string exponent_curve_to_csv(const exponent_curve& c);

json simulation_report_to_json(const simulation_report& r);
std::string simulation_report_to_csv(const simulation_report& r);

json capacity_result_to_json(const capacity_result& r);

// '.' decimal, 15 significant digits (lossless double round trip)
std::string format_double(double v);

}  // namespace sc
