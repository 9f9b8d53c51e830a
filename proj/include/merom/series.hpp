#ifndef MEROM_SERIES_HPP
#define MEROM_SERIES_HPP

#include <map>
#include <optional>

#include "merom/laurent.hpp"

namespace merom {

// Number of justified terms carried by default when an operation (inversion,
// Hensel refinement) genuinely truncates.
inline constexpr long default_prec = 25;

// One-variable Laurent series over Q, truncated with tracked precision.
// Coefficients are exact for exponents < prec(); exponents >= prec() are unknown.
// Series built from finite Laurent data are exact (prec() = exact_prec sentinel);
// precision only becomes finite through genuinely truncating operations, and it
// is never silently widened: an operation that would need unknown coefficients
// throws PrecisionLoss instead of padding zeros.
class TruncSeries {
public:
    static constexpr long exact_prec = static_cast<long>(1) << 50;

    TruncSeries() : prec_(exact_prec) {}
    explicit TruncSeries(const Rat& c);

    static TruncSeries monomial(int exp, const Rat& c);
    static TruncSeries from_laurent(const LaurentPoly& p); // one-variable input, exact
    static TruncSeries zero_known_to(long prec);

    bool exact() const { return prec_ >= exact_prec; }
    long prec() const { return prec_; }
    bool known_zero() const { return coeffs_.empty() && exact(); }
    bool known_range_empty() const { return coeffs_.empty(); }

    // Valuation: smallest exponent with nonzero coefficient. nullopt means the
    // series is exactly zero; an inexact series with empty known range throws.
    std::optional<int> val() const;
    int val_or_fail(const char* what) const;

    Rat coeff(int k) const; // PrecisionLoss when k >= prec()
    const std::map<int, Rat>& known() const { return coeffs_; }
    LaurentPoly known_part() const;

    TruncSeries operator-() const;
    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries operator*(const Rat& c) const;

    // Multiplicative inverse, justified to `window` new terms when the input is
    // exact (an exact non-monomial has an infinite inverse expansion).
    TruncSeries inv(long window = default_prec) const;
    TruncSeries div(const TruncSeries& o, long window = default_prec) const;

    TruncSeries dstd() const; // d/dt
    TruncSeries dlog() const; // t * d/dt
    TruncSeries shift(int k) const; // multiply by t^k
    TruncSeries truncate(long new_prec) const;

    // Exact equality of the known windows; requires identical precision to say "equal".
    bool operator==(const TruncSeries& o) const { return prec_ == o.prec_ && coeffs_ == o.coeffs_; }
    // Agreement on the common justified window.
    bool agrees_with(const TruncSeries& o) const;

    std::string str() const;

private:
    void set(int k, const Rat& c);
    void normalize();

    long prec_;
    std::map<int, Rat> coeffs_; // nonzero known coefficients, keys < prec_
};

} // namespace merom

#endif
