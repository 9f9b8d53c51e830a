#include "merom/laurent.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace merom {

void LaurentPoly::check_compat(const LaurentPoly& o) const {
    if (nvars_ != o.nvars_)
        fail(errc::shape_mismatch, "variable count mismatch in Laurent arithmetic");
}

LaurentPoly LaurentPoly::monomial(int nvars, const Exp& e, const Rat& c) {
    LaurentPoly p(nvars);
    p.set(e, c);
    return p;
}

LaurentPoly LaurentPoly::constant(int nvars, const Rat& c) {
    return monomial(nvars, Exp(nvars, 0), c);
}

Rat LaurentPoly::coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

void LaurentPoly::set(const Exp& e, const Rat& c) {
    if (static_cast<int>(e.size()) != nvars_)
        fail(errc::shape_mismatch, "exponent arity mismatch");
    if (sgn(c) == 0)
        terms_.erase(e);
    else
        terms_[e] = c;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(nvars_);
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    check_compat(o);
    LaurentPoly r = *this;
    for (auto& [e, c] : o.terms_) {
        Rat s = r.coeff(e) + c;
        r.set(e, s);
    }
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    check_compat(o);
    LaurentPoly r(nvars_);
    for (auto& [e1, c1] : terms_)
        for (auto& [e2, c2] : o.terms_) {
            Exp e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            Rat s = r.coeff(e) + c1 * c2;
            r.set(e, s);
        }
    return r;
}

LaurentPoly LaurentPoly::operator*(const Rat& c) const {
    LaurentPoly r(nvars_);
    if (sgn(c) == 0) return r;
    for (auto& [e, cc] : terms_) r.terms_[e] = cc * c;
    return r;
}

ValueElt LaurentPoly::gauss_val(const std::vector<ValueElt>& r) const {
    if (terms_.empty()) fail(errc::zero_input, "Gauss valuation of the zero polynomial");
    if (static_cast<int>(r.size()) != nvars_)
        fail(errc::shape_mismatch, "weight arity mismatch in Gauss valuation");
    bool first = true;
    ValueElt best;
    for (auto& [e, c] : terms_) {
        ValueElt v;
        for (int i = 0; i < nvars_; ++i) v += r[i] * Rat(e[i]);
        if (first || v < best) { best = v; first = false; }
    }
    return best;
}

ValueElt LaurentPoly::gauss_val(const std::vector<Rat>& r) const {
    std::vector<ValueElt> w(r.begin(), r.end());
    return gauss_val(w);
}

LaurentPoly LaurentPoly::dlog(int i) const {
    LaurentPoly r(nvars_);
    for (auto& [e, c] : terms_)
        if (e[i] != 0) r.terms_[e] = c * e[i];
    return r;
}

LaurentPoly LaurentPoly::dstd(int i) const {
    LaurentPoly r(nvars_);
    for (auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exp f = e;
        f[i] -= 1;
        r.terms_[f] = c * e[i];
    }
    return r;
}

LaurentPoly LaurentPoly::subst_monomial(const std::vector<std::vector<long>>& A,
                                        int new_nvars) const {
    if (static_cast<int>(A.size()) != nvars_)
        fail(errc::shape_mismatch, "substitution matrix has wrong row count");
    LaurentPoly r(new_nvars);
    for (auto& [e, c] : terms_) {
        Exp f(new_nvars, 0);
        for (int i = 0; i < nvars_; ++i) {
            if (static_cast<int>(A[i].size()) != new_nvars)
                fail(errc::shape_mismatch, "substitution matrix has wrong column count");
            for (int j = 0; j < new_nvars; ++j) f[j] += static_cast<int>(e[i] * A[i][j]);
        }
        Rat s = r.coeff(f) + c;
        r.set(f, s);
    }
    return r;
}

LaurentPoly LaurentPoly::subst_curve(const std::vector<Rat>& c, const std::vector<long>& a) const {
    if (static_cast<int>(c.size()) != nvars_ || static_cast<int>(a.size()) != nvars_)
        fail(errc::shape_mismatch, "curve data arity mismatch");
    for (auto& ci : c)
        if (sgn(ci) == 0) fail(errc::precondition_violated, "curve constants must be nonzero");
    LaurentPoly r(1);
    for (auto& [e, cc] : terms_) {
        long deg = 0;
        Rat coef = cc;
        for (int i = 0; i < nvars_; ++i) {
            deg += a[i] * e[i];
            // exact power of the curve constant, including negative exponents
            Rat base = c[i];
            long k = e[i];
            if (k < 0) { base = 1 / base; k = -k; }
            for (long t = 0; t < k; ++t) coef *= base;
        }
        Exp f{static_cast<int>(deg)};
        Rat s = r.coeff(f) + coef;
        r.set(f, s);
    }
    return r;
}

LaurentPoly LaurentPoly::stretch_exponents(long h, int upto) const {
    LaurentPoly r(nvars_);
    for (auto& [e, c] : terms_) {
        Exp f = e;
        for (int i = 0; i < upto; ++i) f[i] = static_cast<int>(f[i] * h);
        r.terms_[f] = c;
    }
    return r;
}

LaurentPoly::Exp LaurentPoly::min_exponents() const {
    if (terms_.empty()) fail(errc::zero_input, "monomial content of the zero polynomial");
    Exp m = terms_.begin()->first;
    for (auto& [e, c] : terms_)
        for (int i = 0; i < nvars_; ++i) m[i] = std::min(m[i], e[i]);
    return m;
}

int LaurentPoly::min_exp(int var) const { return min_exponents()[var]; }

bool LaurentPoly::pole_free() const {
    for (auto& [e, c] : terms_)
        for (int x : e)
            if (x < 0) return false;
    return true;
}

bool LaurentPoly::is_unit() const {
    return pole_free() && sgn(coeff(Exp(nvars_, 0))) != 0;
}

std::string LaurentPoly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c);
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << "*";
            if (i < static_cast<int>(names.size()))
                os << names[i];
            else
                os << "x" << (i + 1);
            if (e[i] != 1) os << "^" << e[i];
        }
    }
    return os.str();
}

long dominant_index(const LaurentPoly& g, const ValueElt& s) {
    if (g.is_zero()) fail(errc::zero_input, "dominant index of the zero polynomial");
    if (s.is_rational())
        fail(errc::rational_radius, "dominant index needs an irrational radius");
    if (g.nvars() != 1 && g.nvars() != 2)
        fail(errc::dimension_unsupported, "dominant index expects one disc variable");
    int tv = g.nvars() - 1; // the last variable is the disc variable
    // v(g_j): valuation of the coefficient of t^j in the outer variable (0 if none).
    std::map<long, long> coeff_val;
    for (auto& [e, c] : g.terms()) {
        long j = e[tv];
        long v = (g.nvars() == 2) ? e[0] : 0;
        auto it = coeff_val.find(j);
        if (it == coeff_val.end() || v < it->second) coeff_val[j] = v;
    }
    bool first = true;
    long best_j = 0;
    ValueElt best;
    for (auto& [j, v] : coeff_val) {
        ValueElt w = ValueElt(Rat(v)) + s * Rat(j);
        if (first || w < best) { best = w; best_j = j; first = false; }
    }
    return best_j;
}

} // namespace merom
