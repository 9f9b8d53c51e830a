#ifndef MEROM_TWISTED_HPP
#define MEROM_TWISTED_HPP

#include <vector>

#include "merom/series.hpp"

namespace merom {

// The two derivations the twisted ring is built over.
enum class Twist { ddt, tddt };

inline TruncSeries apply_twist(Twist tw, const TruncSeries& f) {
    return tw == Twist::ddt ? f.dstd() : f.dlog();
}

// Twisted (Ore) polynomial sum_i c[i] * T^i with the commutation rule
// T*f = f*T + delta(f), delta the twist derivation. Coefficients are truncated
// series, so products track justified precision through the twist.
struct TwistedPoly {
    Twist twist = Twist::tddt;
    std::vector<TruncSeries> c; // c[i] multiplies T^i

    TwistedPoly() = default;
    TwistedPoly(Twist tw, std::vector<TruncSeries> coeffs);

    long deg() const { return static_cast<long>(c.size()) - 1; }
    const TruncSeries& coeff(long i) const;
    bool is_zero() const { return c.empty(); }

    void normalize(); // drop known-zero leading coefficients

    TwistedPoly operator+(const TwistedPoly& o) const;
    TwistedPoly operator-(const TwistedPoly& o) const;
    TwistedPoly operator-() const;

    // Left multiplication by a plain series (no twist involved).
    TwistedPoly scale_left(const TruncSeries& f) const;
    // Right multiplication by T^k.
    TwistedPoly times_T(long k) const;

    // Operator application to a series: sum_i c[i] * delta^i(f).
    TruncSeries apply(const TruncSeries& f) const;

    bool agrees_with(const TwistedPoly& o) const;
    std::string str() const;
};

// Product in the twisted ring; TwistMismatch if the twists differ.
TwistedPoly tw_mul(const TwistedPoly& a, const TwistedPoly& b);

// Convenience builders for tests and the CLI.
TwistedPoly tw_from_laurent(Twist tw, const std::vector<LaurentPoly>& coeffs);

struct NewtonPolygon {
    // Lower convex hull of {(i, v(c_i))} over determined nonzero coefficients.
    std::vector<std::pair<long, Rat>> vertices; // ascending in i
    // Ascending hull slopes with multiplicities; multiplicities sum to the
    // degree span vertices.back().first - vertices.front().first.
    std::vector<std::pair<Rat, long>> slopes;

    // The hull value at abscissa i (linear interpolation; +inf outside).
    Rat value_at(long i) const;
    bool single_slope() const { return slopes.size() == 1; }
    // Flattened multiset, each slope repeated with multiplicity, ascending.
    std::vector<Rat> slope_multiset() const;
};

// PrecisionLoss when an undetermined coefficient window could cut below the
// hull computed from the determined ones.
NewtonPolygon newton_polygon(const TwistedPoly& p);

// Slope multiset of the full module E{T}/P: T-power right factors contribute
// slope 0 each (after stripping), the rest comes from the polygon.
// MissingConstantTerm when the constant coefficient is undetermined.
std::vector<Rat> full_slopes(const TwistedPoly& p);

// Same multiset computed from exact coefficient valuations alone, nullopt
// marking exactly-zero coefficients. Ascending, multiplicities included.
std::vector<Rat> slopes_from_valuations(const std::vector<std::optional<Rat>>& vals);

} // namespace merom

#endif
