#include "merom/hensel.hpp"

#include <algorithm>

namespace merom {

namespace {

bool poly_known_zero(const TwistedPoly& p) {
    for (auto& ci : p.c)
        if (!ci.known_range_empty()) return false;
    return true;
}

long poly_min_exp(const TwistedPoly& p, long fallback) {
    long m = fallback;
    bool any = false;
    for (auto& ci : p.c)
        if (!ci.known_range_empty()) {
            long v = *ci.val();
            m = any ? std::min(m, v) : v;
            any = true;
        }
    return any ? m : fallback;
}

TwistedPoly truncate_poly(const TwistedPoly& p, long prec) {
    TwistedPoly r = p;
    for (auto& ci : r.c) ci = ci.truncate(prec);
    r.normalize();
    return r;
}

TwistedPoly shift_poly(const TwistedPoly& p, int k) {
    TwistedPoly r = p;
    for (auto& ci : r.c) ci = ci.shift(k);
    return r;
}

// t-degree slices of a polynomial with exact coefficients: slice[p] lists
// (T-degree, rational) pairs read off the known coefficient terms.
using Slices = std::map<int, std::vector<std::pair<long, Rat>>>;

Slices slice_poly(const TwistedPoly& p) {
    Slices s;
    for (long i = 0; i <= p.deg(); ++i)
        for (auto& [e, c] : p.c[i].known()) s[e].push_back({i, c});
    return s;
}

constexpr long binom_cap = 64;

std::vector<std::vector<Rat>> binom_table() {
    std::vector<std::vector<Rat>> b(binom_cap);
    for (long i = 0; i < binom_cap; ++i) {
        b[i].resize(i + 1);
        b[i][0] = 1;
        for (long l = 1; l <= i; ++l)
            b[i][l] = b[i][l - 1] * Rat(i - l + 1) / Rat(l);
    }
    return b;
}

const std::vector<std::vector<Rat>>& binom() {
    static const auto table = binom_table();
    return table;
}

// One t-degree block of the linearized equation a*v + u*b = r. Unknown
// columns: u_0..u_du then v_0..v_{db-1}; rows: T-degrees 0..dc.
struct GradedSolver {
    Slices a_sl, b_sl;
    long du, db, dc;

    // Diagonal block: t-degree-0 slices acting on unknowns of t-degree n.
    std::vector<std::vector<Rat>> diag(long n) const {
        long cols = du + 1 + db;
        std::vector<std::vector<Rat>> m(dc + 1, std::vector<Rat>(cols, Rat(0)));
        auto ia = a_sl.find(0);
        if (ia != a_sl.end())
            for (auto& [i, alpha] : ia->second) {
                Rat npow(1);
                for (long l = 0; l <= i; ++l) {
                    for (long j = 0; j < db; ++j)
                        if (i + j - l <= dc) m[i + j - l][du + 1 + j] += alpha * binom()[i][l] * npow;
                    npow *= Rat(n);
                }
            }
        auto ib = b_sl.find(0);
        if (ib != b_sl.end())
            for (auto& [i, beta] : ib->second)
                for (long j = 0; j <= du; ++j)
                    if (i + j <= dc) m[i + j][j] += beta; // delta^l(t^0) = 0 for l >= 1
        return m;
    }

    // Push the influence of a solved unknown column at t-degree q onto later
    // right-hand sides through the positive-degree slices.
    void push_solved(long q, const std::vector<Rat>& z,
                     std::map<long, std::vector<Rat>>& rhs_corr, long cap) const {
        for (auto& [p, terms] : a_sl) {
            if (p <= 0 || q + p >= cap) continue;
            auto& dst = rhs_corr[q + p];
            if (dst.empty()) dst.assign(dc + 1, Rat(0));
            for (auto& [i, alpha] : terms) {
                Rat qpow(1);
                for (long l = 0; l <= i; ++l) {
                    for (long j = 0; j < db; ++j) {
                        if (sgn(z[du + 1 + j]) == 0 || i + j - l > dc) continue;
                        dst[i + j - l] += alpha * binom()[i][l] * qpow * z[du + 1 + j];
                    }
                    qpow *= Rat(q);
                }
            }
        }
        for (auto& [p, terms] : b_sl) {
            if (p <= 0 || q + p >= cap) continue;
            auto& dst = rhs_corr[q + p];
            if (dst.empty()) dst.assign(dc + 1, Rat(0));
            for (auto& [i, beta] : terms) {
                Rat ppow(1); // delta^l(t^p) = p^l t^p, applied by T-powers of u
                for (long l = 0; ; ++l) {
                    for (long j = l; j <= du; ++j) {
                        if (sgn(z[j]) == 0 || j - l + i > dc) continue;
                        dst[j - l + i] += beta * binom()[j][l] * ppow * z[j];
                    }
                    if (l >= du) break;
                    ppow *= Rat(p);
                }
            }
        }
    }
};

// Exact Gaussian elimination; free unknowns resolve to zero, inconsistency
// reports the t-degree of the offending block.
std::vector<Rat> solve_block(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs, long n) {
    size_t rows = m.size(), cols = m[0].size();
    std::vector<long> pivot_col(rows, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && sgn(m[sel][c]) == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[rank]);
        std::swap(rhs[sel], rhs[rank]);
        Rat inv = Rat(1) / m[rank][c];
        for (size_t cc = c; cc < cols; ++cc) m[rank][cc] *= inv;
        rhs[rank] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || sgn(m[r][c]) == 0) continue;
            Rat f = m[r][c];
            for (size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
            rhs[r] -= f * rhs[rank];
        }
        pivot_col[rank] = static_cast<long>(c);
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (sgn(rhs[r]) != 0)
            fail(errc::no_convergence,
                 "linearized factorization equation is inconsistent at t-degree " +
                     std::to_string(n) + " (resonance)");
    std::vector<Rat> z(cols, Rat(0));
    for (size_t r = 0; r < rank; ++r) z[pivot_col[r]] = rhs[r];
    return z;
}

struct CoreResult {
    TwistedPoly x, y;
    long iterations;
    std::vector<Rat> residual_vals;
};

// Chord iteration for c = (a+x)(b+y): exact degreewise linear solves against
// the fixed pair (a, b), full residual recomputation each pass. All inputs
// must already have coefficient supports bounded below by 0 slices-wise for
// a and b (callers shift), and everything is truncated at cap.
CoreResult hensel_core(const TwistedPoly& a, const TwistedPoly& b, const TwistedPoly& c,
                       long cap, long max_iter) {
    GradedSolver gs{slice_poly(truncate_poly(a, cap)), slice_poly(truncate_poly(b, cap)),
                    c.deg() - b.deg(), b.deg(), c.deg()};
    if (gs.du < 0) fail(errc::shape_mismatch, "divisor degree exceeds the product degree");
    for (auto& [p, terms] : gs.b_sl)
        if (p < 0)
            fail(errc::not_implemented,
                 "right factor with negative exponents; shift the variable first");
    for (auto& [p, terms] : gs.a_sl)
        if (p < 0) fail(errc::internal_error, "left factor not shifted to nonnegative support");

    TwistedPoly x, y;
    x.twist = y.twist = c.twist;
    CoreResult out;
    out.iterations = 0;
    long attested = cap;
    while (true) {
        TwistedPoly r = truncate_poly(c - tw_mul(a + x, b + y), cap);
        // window justified by this pass: product precision can dip below cap
        // when corrections carry negative exponents
        long win = cap;
        for (auto& ci : r.c)
            if (!ci.exact()) win = std::min(win, ci.prec());
        if (poly_known_zero(r)) {
            attested = win;
            break;
        }
        Rat rv(0);
        bool first = true;
        for (auto& ci : r.c) {
            if (ci.known_zero()) continue;
            Rat v = ci.known_range_empty() ? Rat(ci.prec()) : Rat(*ci.val());
            if (first || v < rv) { rv = v; first = false; }
        }
        out.residual_vals.push_back(rv);
        if (++out.iterations > max_iter)
            fail(errc::no_convergence, "iteration cap exceeded before reaching precision");

        long n0 = poly_min_exp(r, 0);
        std::map<long, std::vector<Rat>> rhs_corr;
        std::vector<TruncSeries> unew(gs.du + 1), vnew(gs.db);
        bool progressed = false;
        for (long n = n0; n < win; ++n) {
            std::vector<Rat> rhs(gs.dc + 1, Rat(0));
            bool any = false;
            for (long k = 0; k <= gs.dc; ++k) {
                if (k <= r.deg()) {
                    auto it = r.c[k].known().find(static_cast<int>(n));
                    if (it != r.c[k].known().end()) { rhs[k] = it->second; any = true; }
                }
            }
            auto corr = rhs_corr.find(n);
            if (corr != rhs_corr.end()) {
                for (long k = 0; k <= gs.dc; ++k)
                    if (sgn(corr->second[k]) != 0) { rhs[k] -= corr->second[k]; any = true; }
                rhs_corr.erase(corr);
            }
            if (!any) continue;
            progressed = true;
            std::vector<Rat> z = solve_block(gs.diag(n), rhs, n);
            bool nonzero = false;
            for (auto& zi : z)
                if (sgn(zi) != 0) { nonzero = true; break; }
            if (!nonzero) continue;
            for (long j = 0; j <= gs.du; ++j)
                if (sgn(z[j]) != 0) unew[j] = unew[j] + TruncSeries::monomial(static_cast<int>(n), z[j]);
            for (long j = 0; j < gs.db; ++j)
                if (sgn(z[gs.du + 1 + j]) != 0)
                    vnew[j] = vnew[j] + TruncSeries::monomial(static_cast<int>(n), z[gs.du + 1 + j]);
            gs.push_solved(n, z, rhs_corr, win);
        }
        if (!progressed)
            fail(errc::precision_loss,
                 "residual window is too narrow to determine further corrections");
        // corrections stay exact between passes; only the final result is
        // cut to the attested window
        x = x + TwistedPoly(c.twist, std::move(unew));
        y = y + TwistedPoly(c.twist, std::move(vnew));
    }
    out.x = truncate_poly(x, attested);
    out.y = truncate_poly(y, attested);
    return out;
}

} // namespace

std::optional<Rat> poly_val(const TwistedPoly& p) {
    std::optional<Rat> m;
    for (auto& ci : p.c) {
        if (ci.known_range_empty()) continue;
        Rat v(*ci.val());
        if (!m || v < *m) m = v;
    }
    return m;
}

std::optional<Rat> poly_val_lower(const TwistedPoly& p) {
    std::optional<Rat> m;
    for (auto& ci : p.c) {
        if (ci.known_zero()) continue;
        Rat v = ci.known_range_empty() ? Rat(ci.prec()) : Rat(*ci.val());
        if (!m || v < *m) m = v;
    }
    return m;
}

HenselCorrection hensel_factor(const TwistedPoly& a, const TwistedPoly& b,
                               const TwistedPoly& c, const HenselParams& params) {
    if (a.twist != c.twist || b.twist != c.twist)
        fail(errc::twist_mismatch, "factorization inputs over different twists");
    if (c.twist != Twist::tddt)
        fail(errc::not_implemented, "factorization is implemented over the log twist");
    if (sgn(params.lambda_val) < 0)
        fail(errc::precondition_violated, "surjectivity modulus must be nonnegative");
    if (a.deg() + b.deg() != c.deg())
        fail(errc::shape_mismatch, "factor degrees must sum to the product degree");

    TwistedPoly r0 = c - tw_mul(a, b);
    HenselCorrection res;
    res.x.twist = res.y.twist = c.twist;
    if (poly_known_zero(r0)) return res;

    auto vc = poly_val(c);
    if (!vc) fail(errc::zero_input, "factorization of an undetermined product");
    auto vr = poly_val_lower(r0);
    if (!(*vr > *vc + Rat(2) * params.lambda_val))
        fail(errc::precondition_violated,
             "initial gap v(c-ab) > v(c) + 2*lambda_val does not hold");

    long m = std::min({static_cast<long>(0), poly_min_exp(a, 0), poly_min_exp(c, 0)});
    long cap = params.target_prec + std::max(static_cast<long>(0), -m) + 2;
    CoreResult core =
        hensel_core(shift_poly(a, static_cast<int>(-m)), b, shift_poly(c, static_cast<int>(-m)),
                    cap - m, 40 + 4 * cap);
    res.x = truncate_poly(shift_poly(core.x, static_cast<int>(m)), params.target_prec);
    res.y = truncate_poly(core.y, params.target_prec);
    res.iterations = core.iterations;
    for (auto& v : core.residual_vals) res.residual_vals.push_back(v + Rat(m));
    return res;
}

std::pair<TwistedPoly, TwistedPoly> tw_divmod_right(const TwistedPoly& p, const TwistedPoly& d) {
    if (p.twist != d.twist) fail(errc::twist_mismatch, "division over different twists");
    if (d.is_zero()) fail(errc::division_by_zero, "twisted division by zero");
    const TruncSeries& lead = d.c[d.deg()];
    if (!lead.exact() || lead.known().size() != 1 || lead.known().begin()->first != 0)
        fail(errc::shape_mismatch, "divisor leading coefficient must be an exact constant");
    Rat lead_inv = Rat(1) / lead.known().begin()->second;

    TwistedPoly q, rem = p;
    q.twist = p.twist;
    q.c.assign(std::max<long>(p.deg() - d.deg() + 1, 0), TruncSeries());
    while (rem.deg() >= d.deg() && !rem.is_zero()) {
        long k = rem.deg();
        if (rem.c[k].known_range_empty() && !rem.c[k].exact()) {
            // top is zero to its window: its unknown digits would feed lower
            // coefficients no earlier than the window plus the divisor's
            // lowest exponent, so tighten those windows and keep dividing
            long w = rem.c[k].prec();
            long vmin = 0;
            for (auto& ci : d.c) {
                if (ci.known_zero()) continue;
                vmin = std::min(vmin, ci.known_range_empty() ? ci.prec() : *ci.val());
            }
            long pen = w + vmin;
            q.c[k - d.deg()] = TruncSeries::zero_known_to(w);
            rem.c.resize(k);
            for (auto& ci : rem.c) ci = ci.truncate(pen);
            rem.normalize();
            continue;
        }
        TruncSeries qk = rem.c[k] * lead_inv;
        long shift = k - d.deg();
        q.c[shift] = q.c[shift] + qk;
        TwistedPoly piece(p.twist, {qk});
        rem = rem - tw_mul(piece.times_T(shift), d);
        if (rem.deg() >= k && !rem.c[k].known_range_empty())
            fail(errc::internal_error, "division failed to cancel the leading term");
        if (rem.deg() >= k) rem.c.resize(k), rem.normalize();
    }
    q.normalize();
    return {q, rem};
}

std::vector<TwistedPoly> slope_factor(const TwistedPoly& p, long prec) {
    if (p.is_zero()) fail(errc::zero_input, "slope factorization of zero");
    if (p.twist != Twist::tddt)
        fail(errc::not_implemented, "slope factorization is implemented over the log twist");
    if (p.c[0].known_zero())
        fail(errc::missing_constant_term, "divide off trailing T-powers before factoring");
    NewtonPolygon np = newton_polygon(p);
    if (np.slopes.size() <= 1) return {p};

    long k_top = np.slopes.back().second;
    long istar = p.deg() - k_top;
    TwistedPoly a0, b0;
    a0.twist = b0.twist = p.twist;
    a0.c.assign(p.c.begin() + istar, p.c.end());
    b0.c.assign(istar + 1, TruncSeries());
    b0.c[istar] = TruncSeries(Rat(1));

    long span = poly_min_exp(p, 0);
    long cap = prec + std::max(static_cast<long>(0), -span) + 2;
    long m = std::min(static_cast<long>(0), poly_min_exp(a0, 0));
    CoreResult core =
        hensel_core(shift_poly(a0, static_cast<int>(-m)), b0, shift_poly(p, static_cast<int>(-m)),
                    cap - m, 40 + 4 * (cap - m));

    TwistedPoly right = b0 + core.y;
    auto [left, rem] = tw_divmod_right(p, right);
    TwistedPoly zero;
    zero.twist = p.twist;
    if (!rem.agrees_with(zero))
        fail(errc::internal_error, "slope split remainder is not zero to precision");
    if (left.deg() != k_top)
        fail(errc::internal_error, "slope split degree does not match the hull multiplicity");

    std::vector<TwistedPoly> out{left};
    auto rest = slope_factor(right, prec);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

AnnulusSplit annulus_factor(const LaurentPoly& g, const ValueElt& s) {
    if (g.nvars() != 1) fail(errc::shape_mismatch, "annulus split expects one variable");
    if (g.is_zero()) fail(errc::zero_input, "annulus split of zero");
    if (s.is_rational()) fail(errc::rational_radius, "annulus split needs an irrational radius");

    long i = 0;
    bool first = true;
    ValueElt best;
    for (auto& [e, c] : g.terms()) {
        ValueElt v = s * Rat(e[0]);
        if (first || v < best) { best = v; i = e[0]; first = false; }
    }

    AnnulusSplit out;
    out.i = i;
    Rat lead = g.coeff({static_cast<int>(i)});
    out.g1 = LaurentPoly::constant(1, Rat(1));
    out.g2 = LaurentPoly::constant(1, lead);
    for (auto& [e, c] : g.terms()) {
        long rel = e[0] - i;
        if (rel == 0) continue;
        if (rel > 0)
            out.g1.set({static_cast<int>(rel)}, c / lead);
        else
            out.g2.set({static_cast<int>(rel)}, c);
    }
    return out;
}

} // namespace merom
