#ifndef MEROM_VALUE_HPP
#define MEROM_VALUE_HPP

#include <string>

#include "merom/rational.hpp"

namespace merom {

// theta is the session-wide quadratic irrational used for irrational weights and
// radii: theta = sqrt(theta_sq), theta_sq a positive non-square rational.
// Write-once per process; defaults to sqrt(2).
void set_theta_sq(const Rat& d);
const Rat& theta_sq();
// Accepts tokens of the form "sqrtN" (N a positive non-square integer).
void set_theta_token(const std::string& tok);

// Element p + q*theta of the value group. Rationals embed with q = 0. Ordering
// and sign are exact: sign(p + q*theta) is decided by comparing p^2 and q^2*theta_sq.
struct ValueElt {
    Rat p, q;

    ValueElt() : p(0), q(0) {}
    ValueElt(const Rat& rational) : p(rational), q(0) {} // NOLINT: implicit by design
    ValueElt(Rat p_, Rat q_) : p(std::move(p_)), q(std::move(q_)) {}

    bool is_rational() const { return sgn(q) == 0; }
    bool is_zero() const { return sgn(p) == 0 && sgn(q) == 0; }

    ValueElt operator-() const { return {-p, -q}; }
    ValueElt operator+(const ValueElt& o) const { return {p + o.p, q + o.q}; }
    ValueElt operator-(const ValueElt& o) const { return {p - o.p, q - o.q}; }
    ValueElt operator*(const Rat& c) const { return {p * c, q * c}; }
    ValueElt& operator+=(const ValueElt& o) { p += o.p; q += o.q; return *this; }
    ValueElt& operator-=(const ValueElt& o) { p -= o.p; q -= o.q; return *this; }
};

int sign(const ValueElt& v);

inline bool operator<(const ValueElt& a, const ValueElt& b) { return sign(a - b) < 0; }
inline bool operator>(const ValueElt& a, const ValueElt& b) { return sign(a - b) > 0; }
inline bool operator<=(const ValueElt& a, const ValueElt& b) { return sign(a - b) <= 0; }
inline bool operator>=(const ValueElt& a, const ValueElt& b) { return sign(a - b) >= 0; }
inline bool operator==(const ValueElt& a, const ValueElt& b) { return a.p == b.p && a.q == b.q; }
inline bool operator!=(const ValueElt& a, const ValueElt& b) { return !(a == b); }

// Product and exact quotient in Q(theta); quotient rationalizes by the conjugate.
ValueElt mul(const ValueElt& a, const ValueElt& b);
ValueElt div(const ValueElt& a, const ValueElt& b);

// Exact floor, by search around the rational part.
long floor(const ValueElt& v);

std::string value_str(const ValueElt& v);

} // namespace merom

#endif
