#include "merom/series.hpp"

#include <algorithm>
#include <sstream>

namespace merom {

TruncSeries::TruncSeries(const Rat& c) : prec_(exact_prec) {
    if (sgn(c) != 0) coeffs_[0] = c;
}

TruncSeries TruncSeries::monomial(int exp, const Rat& c) {
    TruncSeries s;
    if (sgn(c) != 0) s.coeffs_[exp] = c;
    return s;
}

TruncSeries TruncSeries::from_laurent(const LaurentPoly& p) {
    if (p.nvars() != 1) fail(errc::shape_mismatch, "series expects a one-variable polynomial");
    TruncSeries s;
    for (auto& [e, c] : p.terms()) s.coeffs_[e[0]] = c;
    return s;
}

TruncSeries TruncSeries::zero_known_to(long prec) {
    TruncSeries s;
    s.prec_ = prec;
    return s;
}

void TruncSeries::set(int k, const Rat& c) {
    if (sgn(c) == 0)
        coeffs_.erase(k);
    else
        coeffs_[k] = c;
}

void TruncSeries::normalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->first >= prec_ || sgn(it->second) == 0)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

std::optional<int> TruncSeries::val() const {
    if (!coeffs_.empty()) return coeffs_.begin()->first;
    if (exact()) return std::nullopt;
    fail(errc::precision_loss,
         "valuation undetermined: no nonzero coefficient within justified precision");
}

int TruncSeries::val_or_fail(const char* what) const {
    auto v = val();
    if (!v) fail(errc::zero_input, std::string(what) + " of the zero series");
    return *v;
}

Rat TruncSeries::coeff(int k) const {
    if (k >= prec_)
        fail(errc::precision_loss, "coefficient requested beyond justified precision");
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Rat(0) : it->second;
}

LaurentPoly TruncSeries::known_part() const {
    LaurentPoly p(1);
    for (auto& [k, c] : coeffs_) p.set({k}, c);
    return p;
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries r = *this;
    for (auto& [k, c] : r.coeffs_) c = -c;
    return r;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    TruncSeries r;
    r.prec_ = std::min(prec_, o.prec_);
    r.coeffs_ = coeffs_;
    for (auto& [k, c] : o.coeffs_) {
        auto it = r.coeffs_.find(k);
        if (it == r.coeffs_.end())
            r.coeffs_[k] = c;
        else
            it->second += c;
    }
    r.normalize();
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const { return *this + (-o); }

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    // The product coefficient at k is fully known iff every contribution with an
    // unknown factor lies at k >= prec + val of the other side.
    TruncSeries r;
    long la = coeffs_.empty() ? prec_ : coeffs_.begin()->first;
    long lb = o.coeffs_.empty() ? o.prec_ : o.coeffs_.begin()->first;
    if (exact() && o.exact())
        r.prec_ = exact_prec;
    else
        r.prec_ = std::min(prec_ + lb, o.prec_ + la);
    for (auto& [ka, ca] : coeffs_)
        for (auto& [kb, cb] : o.coeffs_) {
            long k = static_cast<long>(ka) + kb;
            if (k >= r.prec_) continue;
            auto it = r.coeffs_.find(static_cast<int>(k));
            if (it == r.coeffs_.end())
                r.coeffs_[static_cast<int>(k)] = ca * cb;
            else
                it->second += ca * cb;
        }
    r.normalize();
    return r;
}

TruncSeries TruncSeries::operator*(const Rat& c) const {
    TruncSeries r;
    r.prec_ = prec_;
    if (sgn(c) == 0) return r;
    r.coeffs_ = coeffs_;
    for (auto& [k, cc] : r.coeffs_) cc *= c;
    return r;
}

TruncSeries TruncSeries::inv(long window) const {
    if (coeffs_.empty()) {
        if (exact()) fail(errc::division_by_zero, "inverse of the zero series");
        fail(errc::precision_loss, "inverse needs a determined leading term");
    }
    int v = coeffs_.begin()->first;
    long out_prec;
    if (exact()) {
        // A single monomial inverts exactly; otherwise the expansion is infinite
        // and we keep `window` justified terms.
        out_prec = (coeffs_.size() == 1) ? exact_prec : -static_cast<long>(v) + window;
    } else {
        out_prec = prec_ - 2 * static_cast<long>(v);
    }
    TruncSeries r;
    r.prec_ = out_prec;
    Rat inv_lead = 1 / coeffs_.begin()->second;
    r.coeffs_[-v] = inv_lead;
    if (coeffs_.size() == 1) {
        // A monomial inverts to a monomial; nothing further regardless of precision.
        r.normalize();
        return r;
    }
    // b_{-v} = 1/a_v; for j > -v, a_v*b_j + sum_{i>v} a_i*b_{j+v-i} = 0.
    for (long j = -static_cast<long>(v) + 1; j < out_prec; ++j) {
        Rat acc(0);
        for (auto& [i, ai] : coeffs_) {
            if (i == v) continue;
            long bj = j + v - i;
            auto it = r.coeffs_.find(static_cast<int>(bj));
            if (it != r.coeffs_.end()) acc += ai * it->second;
        }
        Rat bj = -inv_lead * acc;
        if (sgn(bj) != 0) r.coeffs_[static_cast<int>(j)] = bj;
    }
    r.normalize();
    return r;
}

TruncSeries TruncSeries::div(const TruncSeries& o, long window) const {
    return *this * o.inv(window);
}

TruncSeries TruncSeries::dstd() const {
    TruncSeries r;
    r.prec_ = exact() ? exact_prec : prec_ - 1;
    for (auto& [k, c] : coeffs_) {
        if (k == 0) continue;
        r.coeffs_[k - 1] = c * k;
    }
    r.normalize();
    return r;
}

TruncSeries TruncSeries::dlog() const {
    TruncSeries r;
    r.prec_ = prec_;
    for (auto& [k, c] : coeffs_) {
        if (k == 0) continue;
        r.coeffs_[k] = c * k;
    }
    return r;
}

TruncSeries TruncSeries::shift(int k) const {
    TruncSeries r;
    r.prec_ = exact() ? exact_prec : prec_ + k;
    for (auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
    return r;
}

TruncSeries TruncSeries::truncate(long new_prec) const {
    TruncSeries r = *this;
    r.prec_ = std::min(prec_, new_prec);
    r.normalize();
    return r;
}

bool TruncSeries::agrees_with(const TruncSeries& o) const {
    long p = std::min(prec_, o.prec_);
    for (auto& [k, c] : coeffs_)
        if (k < p && c != o.coeff(k)) return false;
    for (auto& [k, c] : o.coeffs_)
        if (k < p && c != coeff(k)) return false;
    return true;
}

std::string TruncSeries::str() const {
    std::ostringstream os;
    if (coeffs_.empty()) {
        os << "0";
    } else {
        bool first = true;
        for (auto& [k, c] : coeffs_) {
            if (!first) os << " + ";
            first = false;
            os << rat_str(c);
            if (k != 0) os << "*t^" << k;
        }
    }
    if (!exact()) os << " + O(t^" << prec_ << ")";
    return os.str();
}

} // namespace merom
