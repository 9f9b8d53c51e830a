#ifndef MEROM_LAURENT_HPP
#define MEROM_LAURENT_HPP

#include <map>
#include <vector>

#include "merom/value.hpp"

namespace merom {

// Laurent polynomial over Q in n variables: finite map exponent-vector -> coefficient.
// Zero coefficients are never stored, so support() is exactly the nonzero terms and
// the map ordering makes every traversal deterministic.
class LaurentPoly {
public:
    using Exp = std::vector<int>;

    LaurentPoly() : nvars_(0) {}
    explicit LaurentPoly(int nvars) : nvars_(nvars) {}

    static LaurentPoly monomial(int nvars, const Exp& e, const Rat& c);
    static LaurentPoly constant(int nvars, const Rat& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exp, Rat>& terms() const { return terms_; }

    Rat coeff(const Exp& e) const;
    void set(const Exp& e, const Rat& c);

    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator*(const Rat& c) const;
    bool operator==(const LaurentPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // min_r over the support of <e, r>; the Gauss valuation at weight r.
    ValueElt gauss_val(const std::vector<ValueElt>& r) const;
    ValueElt gauss_val(const std::vector<Rat>& r) const;

    // x_i * d/dx_i (log derivation) and d/dx_i.
    LaurentPoly dlog(int i) const;
    LaurentPoly dstd(int i) const;

    // Monomial substitution x_i -> prod_j y_j^(A[i][j]); A is nvars x new_nvars.
    LaurentPoly subst_monomial(const std::vector<std::vector<long>>& A, int new_nvars) const;

    // Curve substitution x_i -> c_i * t^(a_i); result is one-variable in t.
    LaurentPoly subst_curve(const std::vector<Rat>& c, const std::vector<long>& a) const;

    // x_i -> x_i^h for i < upto (Kummer pullback of the first `upto` variables).
    LaurentPoly stretch_exponents(long h, int upto) const;

    // Componentwise minimum of the support exponents; the monomial content.
    Exp min_exponents() const; // ZeroInput on the zero polynomial
    int min_exp(int var) const;

    // No negative exponent in any variable (element of the power series ring R).
    bool pole_free() const;
    // pole_free and nonzero constant term (unit of R).
    bool is_unit() const;

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    void check_compat(const LaurentPoly& o) const;

    int nvars_;
    std::map<Exp, Rat> terms_;
};

// Index j minimizing v(g_j) + j*s, where j runs over the exponents of the last
// variable and v(g_j) is the valuation of the coefficient in the outer variable
// (0 when g is genuinely one-variable). Unique because s is irrational.
long dominant_index(const LaurentPoly& g, const ValueElt& s);

} // namespace merom

#endif
