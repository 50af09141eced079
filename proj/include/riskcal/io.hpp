#pragma once

// JSON input schema for spaces and utilities.
//
// Space file:
//   {"masses": [[num, den], ...], "f1_blocks": [[i, ...], ...], "labels": ["a", ...]}
// or a uniform product grid whose F1 is the row partition:
//   {"product_grid": {"rows": R, "cols": C}}
//
// Utility file:
//   {"utility": {"kind": "expectation"}}
//   {"utility": {"kind": "es", "alpha": [num, den]}}
//   {"utility": {"kind": "power", "alpha": 0.5}}
//   {"utility": {"kind": "piecewise", "knots": [[p, psi], ...]}}
//   {"utility": {"kind": "scenario", "measures": [[w, ...], ...]}}
//   {"utility": {"kind": "product", "rows": R, "cols": C}}
// Scenario weights may be numbers or [num, den] pairs.

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskcal/space.hpp"
#include "riskcal/utility.hpp"

namespace riskcal::io {

using Json = nlohmann::ordered_json;

/// Schema violation; the message names the offending field.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpaceFile {
    OutcomeSpace space;
    Filtration filtration;
};

Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

SpaceFile parse_space(const Json& doc);
SpaceFile load_space(const std::string& path);
Json space_to_json(const OutcomeSpace& space, const Filtration& filtration);

CoherentUtility parse_utility(const Json& doc);
CoherentUtility load_utility(const std::string& path);
Json utility_to_json(const CoherentUtility& u);

Rational parse_rational(const Json& v, const std::string& field);
Json rational_to_json(const Rational& q);

/// Parses "1,0,2.5" or a JSON array. Values given per F1 block are expanded to
/// outcomes; otherwise the length must equal the number of outcomes.
RandomVariable parse_vector(const std::string& text, const Partition& f1, std::size_t outcomes,
                            const std::string& field);

}  // namespace riskcal::io
