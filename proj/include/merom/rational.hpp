#ifndef MEROM_RATIONAL_HPP
#define MEROM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "merom/error.hpp"

namespace merom {

// Exact rational scalar. All coefficient arithmetic in the library runs over Q;
// there is no floating point anywhere on a mathematical path.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    if (d == 0) fail(errc::division_by_zero, "rational with zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// Parses "p", "-p", or "p/q". Used by JSON input and the CLI.
Rat parse_rat(const std::string& s);

// Serializes as "p" or "p/q" with canonical sign on the numerator.
std::string rat_str(const Rat& r);

inline int sgn(const Rat& r) { return mpq_sgn(r.get_mpq_t()); }

long rat_floor(const Rat& r);
long rat_ceil(const Rat& r);

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Fits to long, failing loudly on overflow; exponents and degrees stay desk-scale.
long to_long(const Rat& r);

} // namespace merom

#endif
