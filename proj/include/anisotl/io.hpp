#pragma once

#include "anisotl/norms.hpp"
#include "anisotl/orbit.hpp"
#include "anisotl/witness.hpp"

#include <json.hpp>

#include <string>

namespace anisotl {
namespace io {

using nlohmann::json;

/// {"dim": 2, "mode": "rational"|"float", "entries": [["2","0"],["0","-2"]]}
/// Rational entries are "n" or "n/d" strings; float entries are numbers.
expansive_matrix matrix_from_json(const json& j);
json matrix_to_json(const expansive_matrix& m);

/// {"matrix": {...}, "alpha": 0.0, "p": "2"|"inf", "q": "0.5"|"inf"}
space_params space_from_json(const json& j);
json space_to_json(const space_params& s);

/// {"entries": [{"j": 0, "k": [0,0], "re": 1.0, "im": 0.0}, ...]}
coefficient_sequence sequence_from_json(const json& j);
json sequence_to_json(const coefficient_sequence& c);

/// {"a": <matrix>, "b": <matrix>}
std::pair<expansive_matrix, expansive_matrix> pair_from_json(const json& j);

/// "box:x0,y0,x1,y1" or "ball:cx,cy,r" (d = 1: "box:x0,x1" / "ball:c,r")
geom::region parse_region_literal(const std::string& text);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

json norm_result_to_json(const norm_result& r);
json orbit_verdict_to_json(const orbit_verdict& v);
json decomposition_to_json(const orbit_decomposition& d);
json classify_to_json(const classify_result& r);
json law_report_to_json(const law_report& rep);
json certificate_to_json(const expansive_certificate& c);

} // namespace io
} // namespace anisotl
