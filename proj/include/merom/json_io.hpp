#ifndef MEROM_JSON_IO_HPP
#define MEROM_JSON_IO_HPP

#include "json.hpp"
#include "merom/diffmod.hpp"
#include "merom/twisted.hpp"

namespace merom {

// Key order is preserved on emission so identical data serializes to
// identical bytes.
using Json = nlohmann::ordered_json;

// Rationals travel as strings "p/q" (or "p" for integers).

// {"nvars": n, "terms": [{"exp": [e1..en], "coeff": "p/q"}, ...]}
Json laurent_to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const Json& j);

// Same shape with nvars = 1; a "prec" key marks a truncated series, its
// absence an exact one.
Json series_to_json(const TruncSeries& s);
TruncSeries series_from_json(const Json& j);

// {"twist": "ddt"|"tddt", "coeffs": [series...]} ascending in T.
Json twisted_to_json(const TwistedPoly& p);
TwistedPoly twisted_from_json(const Json& j);

// {"nvars": n, "poles": m, "rank": d, "matrices": [per-variable d x d
// matrices of Laurent polynomials]}. Validated on input.
Json module_to_json(const DiffModule& m);
DiffModule module_from_json(const Json& j);

// {"nvars": n, "poles": m, "terms": [{"phi": laurent, "rank": r, "block":
// [per-pole-variable r x r matrices of "p/q"]}]}. nvars, poles, and rank may
// be omitted when derivable from the terms. Validated on input.
Json good_to_json(const GoodModel& g);
GoodModel good_from_json(const Json& j);

// Reads and parses a whole file; ParseError on any failure.
Json load_json_file(const std::string& path);

}  // namespace merom

#endif
