#ifndef MEROM_HENSEL_HPP
#define MEROM_HENSEL_HPP

#include <optional>
#include <utility>

#include "merom/twisted.hpp"

namespace merom {

// Quantitative factorization parameters. The surjectivity modulus of the
// linearized solve is carried in valuation units: lambda_val = 0 means the
// solve matches coefficients isometrically; larger values demand a wider
// initial gap of the input. target_prec caps the justified window of the
// corrections.
struct HenselParams {
    Rat lambda_val = Rat(0);
    long target_prec = default_prec;
};

struct HenselCorrection {
    TwistedPoly x, y;
    long iterations = 0;
    // Lower bound on the residual valuation after each iteration, for
    // contraction audits.
    std::vector<Rat> residual_vals;
};

// Plain valuation of a twisted polynomial: min over determined coefficient
// valuations. nullopt when no coefficient has a determined term.
std::optional<Rat> poly_val(const TwistedPoly& p);

// Lower bound on the valuation that also counts blank windows at their
// justified precision. nullopt for the empty polynomial.
std::optional<Rat> poly_val_lower(const TwistedPoly& p);

// Refine an approximate factorization c ~ a*b into c = (a+x)(b+y) with
// deg x <= deg c - deg b and deg y < deg b. Requires deg a + deg b = deg c
// and the gap v(c - ab) > v(c) + 2*lambda_val in plain valuation.
HenselCorrection hensel_factor(const TwistedPoly& a, const TwistedPoly& b,
                               const TwistedPoly& c, const HenselParams& params);

// Right division p = q*d + r with deg r < deg d; d must have an exact
// constant leading coefficient.
std::pair<TwistedPoly, TwistedPoly> tw_divmod_right(const TwistedPoly& p,
                                                    const TwistedPoly& d);

// Factor p into pure-slope factors, slopes strictly descending left to
// right; tw_mul over the result reproduces p to justified precision and the
// factor degrees equal the hull multiplicities. Every factor after the first
// is monic; the first carries the leading coefficient of p.
std::vector<TwistedPoly> slope_factor(const TwistedPoly& p, long prec = default_prec);

struct AnnulusSplit {
    long i = 0;
    LaurentPoly g1, g2;
};

// Split a one-variable Laurent polynomial as g = t^i * g1 * g2 at an
// irrational radius s: i is the dominant index, g1 = 1 + (positive powers)
// is a unit on the inner disc, g2 holds the constant and negative powers and
// is a unit on the outer annulus; v_s(g1) = v_s(g2) = 0.
AnnulusSplit annulus_factor(const LaurentPoly& g, const ValueElt& s);

} // namespace merom

#endif
