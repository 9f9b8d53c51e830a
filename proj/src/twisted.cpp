#include "merom/twisted.hpp"

#include <algorithm>
#include <sstream>

namespace merom {

TwistedPoly::TwistedPoly(Twist tw, std::vector<TruncSeries> coeffs)
    : twist(tw), c(std::move(coeffs)) {
    normalize();
}

const TruncSeries& TwistedPoly::coeff(long i) const {
    if (i < 0 || i >= static_cast<long>(c.size()))
        fail(errc::shape_mismatch, "coefficient index out of range");
    return c[i];
}

void TwistedPoly::normalize() {
    while (!c.empty() && c.back().known_zero()) c.pop_back();
}

TwistedPoly TwistedPoly::operator+(const TwistedPoly& o) const {
    if (twist != o.twist) fail(errc::twist_mismatch, "adding polynomials over different twists");
    TwistedPoly r;
    r.twist = twist;
    r.c.resize(std::max(c.size(), o.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < c.size()) r.c[i] = r.c[i] + c[i];
        if (i < o.c.size()) r.c[i] = r.c[i] + o.c[i];
    }
    r.normalize();
    return r;
}

TwistedPoly TwistedPoly::operator-() const {
    TwistedPoly r = *this;
    for (auto& ci : r.c) ci = -ci;
    return r;
}

TwistedPoly TwistedPoly::operator-(const TwistedPoly& o) const { return *this + (-o); }

TwistedPoly TwistedPoly::scale_left(const TruncSeries& f) const {
    TwistedPoly r = *this;
    for (auto& ci : r.c) ci = f * ci;
    r.normalize();
    return r;
}

TwistedPoly TwistedPoly::times_T(long k) const {
    TwistedPoly r;
    r.twist = twist;
    r.c.assign(c.size() + k, TruncSeries());
    for (size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
    r.normalize();
    return r;
}

TruncSeries TwistedPoly::apply(const TruncSeries& f) const {
    TruncSeries acc;
    TruncSeries d = f;
    for (size_t i = 0; i < c.size(); ++i) {
        acc = acc + c[i] * d;
        d = apply_twist(twist, d);
    }
    return acc;
}

bool TwistedPoly::agrees_with(const TwistedPoly& o) const {
    if (twist != o.twist) return false;
    size_t n = std::max(c.size(), o.c.size());
    TruncSeries zero;
    for (size_t i = 0; i < n; ++i) {
        const TruncSeries& a = i < c.size() ? c[i] : zero;
        const TruncSeries& b = i < o.c.size() ? o.c[i] : zero;
        if (!a.agrees_with(b)) return false;
    }
    return true;
}

std::string TwistedPoly::str() const {
    std::ostringstream os;
    if (c.empty()) return "0";
    for (long i = deg(); i >= 0; --i) {
        os << "(" << c[i].str() << ")";
        if (i > 0) os << "*T^" << i << " + ";
    }
    return os.str();
}

TwistedPoly tw_mul(const TwistedPoly& a, const TwistedPoly& b) {
    if (a.twist != b.twist)
        fail(errc::twist_mismatch, "product of polynomials over different twists");
    TwistedPoly r;
    r.twist = a.twist;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, TruncSeries());
    // T^i * f = sum_l binom(i,l) * delta^l(f) * T^(i-l)
    for (size_t j = 0; j < b.c.size(); ++j) {
        // delta powers of b_j, extended on demand
        std::vector<TruncSeries> dpow{b.c[j]};
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i].known_zero()) continue;
            while (dpow.size() <= i) dpow.push_back(apply_twist(a.twist, dpow.back()));
            Rat binom(1);
            for (size_t l = 0; l <= i; ++l) {
                size_t k = i - l + j;
                r.c[k] = r.c[k] + a.c[i] * dpow[l] * binom;
                binom = binom * Rat(static_cast<long>(i - l)) / Rat(static_cast<long>(l + 1));
            }
        }
    }
    r.normalize();
    return r;
}

TwistedPoly tw_from_laurent(Twist tw, const std::vector<LaurentPoly>& coeffs) {
    std::vector<TruncSeries> c;
    c.reserve(coeffs.size());
    for (auto& p : coeffs) c.push_back(TruncSeries::from_laurent(p));
    return TwistedPoly(tw, std::move(c));
}

Rat NewtonPolygon::value_at(long i) const {
    for (size_t k = 0; k + 1 < vertices.size(); ++k) {
        auto& [x0, y0] = vertices[k];
        auto& [x1, y1] = vertices[k + 1];
        if (i >= x0 && i <= x1)
            return y0 + (y1 - y0) * Rat(i - x0) / Rat(x1 - x0);
    }
    if (vertices.size() == 1 && vertices[0].first == i) return vertices[0].second;
    fail(errc::internal_error, "polygon queried outside its span");
}

std::vector<Rat> NewtonPolygon::slope_multiset() const {
    std::vector<Rat> out;
    for (auto& [s, m] : slopes)
        for (long k = 0; k < m; ++k) out.push_back(s);
    return out;
}

namespace {

// Monotone-chain lower hull; points arrive sorted by abscissa.
NewtonPolygon hull_of(const std::vector<std::pair<long, Rat>>& pts) {
    std::vector<std::pair<long, Rat>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // keep b only if it lies strictly below segment a->pt
            Rat cross = (b.second - a.second) * Rat(pt.first - a.first) -
                        (pt.second - a.second) * Rat(b.first - a.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    NewtonPolygon np;
    np.vertices = hull;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        Rat s = (hull[k + 1].second - hull[k].second) / Rat(hull[k + 1].first - hull[k].first);
        long m = hull[k + 1].first - hull[k].first;
        if (!np.slopes.empty() && np.slopes.back().first == s)
            np.slopes.back().second += m;
        else
            np.slopes.push_back({s, m});
    }
    return np;
}

} // namespace

NewtonPolygon newton_polygon(const TwistedPoly& p) {
    std::vector<std::pair<long, Rat>> pts;
    std::vector<std::pair<long, long>> bounds; // (i, val >= bound) for blank windows
    for (long i = 0; i <= p.deg(); ++i) {
        const TruncSeries& ci = p.c[i];
        if (ci.known_range_empty()) {
            if (!ci.exact()) bounds.push_back({i, ci.prec()});
            continue; // exact zero contributes no point
        }
        pts.push_back({i, Rat(*ci.val())});
    }
    if (pts.empty()) fail(errc::zero_input, "Newton polygon of a zero polynomial");

    NewtonPolygon np = hull_of(pts);

    // Undetermined coefficients must not be able to cut or extend the hull.
    long lo = np.vertices.front().first, hi = np.vertices.back().first;
    for (auto& [i, b] : bounds) {
        if (i < lo || i > hi)
            fail(errc::precision_loss,
                 "undetermined coefficient at an endpoint of the Newton polygon");
        if (np.value_at(i) > Rat(b))
            fail(errc::precision_loss,
                 "undetermined coefficient could cut below the Newton polygon");
    }
    return np;
}

std::vector<Rat> full_slopes(const TwistedPoly& p) {
    if (p.is_zero()) fail(errc::zero_input, "slopes of the zero polynomial");
    long strip = 0;
    while (strip <= p.deg() && p.c[strip].known_zero()) ++strip;
    if (strip <= p.deg() && p.c[strip].known_range_empty())
        fail(errc::missing_constant_term,
             "constant coefficient undetermined; divide off T-powers explicitly");
    TwistedPoly q;
    q.twist = p.twist;
    q.c.assign(p.c.begin() + strip, p.c.end());
    std::vector<Rat> out(strip, Rat(0)); // each stripped T contributes slope 0
    if (q.deg() >= 1) {
        auto np = newton_polygon(q);
        if (np.vertices.front().first != 0 || np.vertices.back().first != q.deg())
            fail(errc::internal_error, "polygon span mismatch after stripping");
        auto ms = np.slope_multiset();
        out.insert(out.end(), ms.begin(), ms.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Rat> slopes_from_valuations(const std::vector<std::optional<Rat>>& vals) {
    size_t strip = 0;
    while (strip < vals.size() && !vals[strip]) ++strip;
    if (strip == vals.size()) fail(errc::zero_input, "slopes of the zero polynomial");
    std::vector<std::pair<long, Rat>> pts;
    for (size_t i = strip; i < vals.size(); ++i)
        if (vals[i]) pts.push_back({long(i - strip), *vals[i]});
    std::vector<Rat> out(strip, Rat(0));
    if (pts.size() >= 2) {
        auto ms = hull_of(pts).slope_multiset();
        out.insert(out.end(), ms.begin(), ms.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace merom
