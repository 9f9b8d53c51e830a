#include "merom/diffmod.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "merom/hensel.hpp"

namespace merom {

namespace {

bool mat_is_zero(const Mat<LaurentPoly>& a) {
    for (auto& row : a)
        for (auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

void check_pole_locations(const LaurentPoly& f, int poles, const char* what) {
    for (auto& [e, c] : f.terms())
        for (size_t j = poles; j < e.size(); ++j)
            if (e[j] < 0) fail(errc::pole_outside_divisor, what);
}

Mat<LaurentPoly> derive_mat(const DiffModule& m, const Mat<LaurentPoly>& a, int i) {
    Mat<LaurentPoly> r = a;
    for (auto& row : r)
        for (auto& e : row) e = m.derive(e, i);
    return r;
}

void check_same_shape(const DiffModule& a, const DiffModule& b) {
    if (a.nvars != b.nvars || a.poles != b.poles)
        fail(errc::shape_mismatch, "modules live over different Laurent rings");
}

LaurentPoly lp_one(int nvars) { return LaurentPoly::constant(nvars, Rat(1)); }

} // namespace

void DiffModule::validate() const {
    if (nvars < 1 || poles < 0 || poles > nvars)
        fail(errc::shape_mismatch, "variable and pole counts are inconsistent");
    if (rank < 1) fail(errc::shape_mismatch, "module rank must be positive");
    if (static_cast<long>(mats.size()) != nvars)
        fail(errc::shape_mismatch, "one action matrix per variable required");
    for (auto& n : mats) {
        if (mat_rows(n) != rank || mat_cols(n) != rank)
            fail(errc::shape_mismatch, "action matrix shape disagrees with the rank");
        for (auto& row : n)
            for (auto& e : row) {
                if (e.nvars() != nvars)
                    fail(errc::shape_mismatch, "matrix entry has the wrong variable count");
                check_pole_locations(e, poles, "matrix entry has a pole outside the divisor");
            }
    }
}

LaurentPoly DiffModule::derive(const LaurentPoly& f, int i) const {
    return i < poles ? f.dlog(i) : f.dstd(i);
}

bool is_integrable(const DiffModule& m) {
    m.validate();
    for (int i = 0; i < m.nvars; ++i)
        for (int j = i + 1; j < m.nvars; ++j) {
            Mat<LaurentPoly> lhs = mat_add(
                mat_sub(derive_mat(m, m.mats[j], i), derive_mat(m, m.mats[i], j)),
                mat_sub(mat_mul(m.mats[i], m.mats[j]), mat_mul(m.mats[j], m.mats[i])));
            if (!mat_is_zero(lhs)) return false;
        }
    return true;
}

DiffModule e_phi(const LaurentPoly& phi, int nvars, int poles) {
    if (phi.nvars() != nvars) fail(errc::shape_mismatch, "twist has the wrong variable count");
    check_pole_locations(phi, poles, "twist has a pole outside the divisor");
    DiffModule m;
    m.nvars = nvars;
    m.poles = poles;
    m.rank = 1;
    for (int i = 0; i < nvars; ++i) m.mats.push_back({{m.derive(phi, i)}});
    m.validate();
    return m;
}

DiffModule direct_sum(const DiffModule& a, const DiffModule& b) {
    a.validate();
    b.validate();
    check_same_shape(a, b);
    DiffModule m;
    m.nvars = a.nvars;
    m.poles = a.poles;
    m.rank = a.rank + b.rank;
    for (int i = 0; i < a.nvars; ++i) {
        Mat<LaurentPoly> n(m.rank, std::vector<LaurentPoly>(m.rank, LaurentPoly(m.nvars)));
        for (long r = 0; r < a.rank; ++r)
            for (long c = 0; c < a.rank; ++c) n[r][c] = a.mats[i][r][c];
        for (long r = 0; r < b.rank; ++r)
            for (long c = 0; c < b.rank; ++c) n[a.rank + r][a.rank + c] = b.mats[i][r][c];
        m.mats.push_back(std::move(n));
    }
    return m;
}

DiffModule tensor(const DiffModule& a, const DiffModule& b) {
    a.validate();
    b.validate();
    check_same_shape(a, b);
    DiffModule m;
    m.nvars = a.nvars;
    m.poles = a.poles;
    m.rank = a.rank * b.rank;
    Mat<LaurentPoly> ia = mat_identity(a.rank, lp_one(a.nvars), LaurentPoly(a.nvars));
    Mat<LaurentPoly> ib = mat_identity(b.rank, lp_one(b.nvars), LaurentPoly(b.nvars));
    for (int i = 0; i < a.nvars; ++i)
        m.mats.push_back(mat_add(kron(a.mats[i], ib), kron(ia, b.mats[i])));
    return m;
}

DiffModule dual(const DiffModule& m) {
    m.validate();
    DiffModule d = m;
    for (auto& n : d.mats) n = mat_neg(mat_transpose(n));
    return d;
}

DiffModule end_module(const DiffModule& m) { return tensor(m, dual(m)); }

DiffModule exterior_power(const DiffModule& m, long k) {
    m.validate();
    if (k < 1 || k > m.rank) fail(errc::shape_mismatch, "exterior power degree out of range");
    std::vector<std::vector<long>> subsets;
    std::vector<long> cur(k);
    for (long i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        subsets.push_back(cur);
        long i = k - 1;
        while (i >= 0 && cur[i] == m.rank - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (long j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    std::map<std::vector<long>, long> index;
    for (size_t s = 0; s < subsets.size(); ++s) index[subsets[s]] = static_cast<long>(s);

    DiffModule r;
    r.nvars = m.nvars;
    r.poles = m.poles;
    r.rank = static_cast<long>(subsets.size());
    for (int v = 0; v < m.nvars; ++v) {
        const Mat<LaurentPoly>& n = m.mats[v];
        Mat<LaurentPoly> w(r.rank, std::vector<LaurentPoly>(r.rank, LaurentPoly(m.nvars)));
        for (size_t s = 0; s < subsets.size(); ++s) {
            const auto& from = subsets[s];
            for (long pos = 0; pos < k; ++pos) {
                long j = from[pos];
                for (long a = 0; a < m.rank; ++a) {
                    if (n[a][j].is_zero()) continue;
                    if (a == j) {
                        w[s][s] = w[s][s] + n[j][j];
                        continue;
                    }
                    if (std::binary_search(from.begin(), from.end(), a)) continue;
                    std::vector<long> to = from;
                    to[pos] = a;
                    std::sort(to.begin(), to.end());
                    long apos = std::lower_bound(to.begin(), to.end(), a) - to.begin();
                    long t = index.at(to);
                    LaurentPoly term = n[a][j];
                    if ((pos + apos) % 2 != 0) term = -term;
                    w[t][s] = w[t][s] + term;
                }
            }
        }
        r.mats.push_back(std::move(w));
    }
    return r;
}

DiffModule kummer_pullback(const DiffModule& m, long h) {
    m.validate();
    if (h < 1) fail(errc::precondition_violated, "covering degree must be positive");
    DiffModule r = m;
    for (int i = 0; i < m.nvars; ++i)
        for (auto& row : r.mats[i])
            for (auto& e : row) {
                e = e.stretch_exponents(h, m.poles);
                if (i < m.poles) e = e * Rat(h);
            }
    return r;
}

namespace {

Mat<LaurentPoly> lp_adjugate(const Mat<LaurentPoly>& u) {
    long d = mat_rows(u);
    int nv = u[0][0].nvars();
    Mat<LaurentPoly> adj(d, std::vector<LaurentPoly>(d));
    if (d == 1) {
        adj[0][0] = lp_one(nv);
        return adj;
    }
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            Mat<LaurentPoly> minor;
            for (long r = 0; r < d; ++r) {
                if (r == j) continue;
                std::vector<LaurentPoly> row;
                for (long c = 0; c < d; ++c)
                    if (c != i) row.push_back(u[r][c]);
                minor.push_back(std::move(row));
            }
            LaurentPoly m = lp_det(minor);
            adj[i][j] = ((i + j) % 2 != 0) ? -m : m;
        }
    return adj;
}

} // namespace

DiffModule gauge_transform(const DiffModule& m, const Mat<LaurentPoly>& u) {
    m.validate();
    if (mat_rows(u) != m.rank || mat_cols(u) != m.rank)
        fail(errc::shape_mismatch, "gauge matrix shape disagrees with the rank");
    LaurentPoly det = lp_det(u);
    if (det.terms().size() != 1)
        fail(errc::precondition_violated, "gauge determinant must be a unit monomial");
    auto [mono, coef] = *det.terms().begin();
    LaurentPoly::Exp neg = mono;
    for (int& e : neg) e = -e;
    LaurentPoly detinv = LaurentPoly::monomial(m.nvars, neg, Rat(1) / coef);
    Mat<LaurentPoly> uinv = lp_adjugate(u);
    for (auto& row : uinv)
        for (auto& e : row) e = e * detinv;
    Mat<LaurentPoly> check = mat_mul(uinv, u);
    for (long i = 0; i < m.rank; ++i)
        for (long j = 0; j < m.rank; ++j)
            if (check[i][j] != (i == j ? lp_one(m.nvars) : LaurentPoly(m.nvars)))
                fail(errc::internal_error, "gauge inverse failed its identity check");

    DiffModule r = m;
    for (int i = 0; i < m.nvars; ++i)
        r.mats[i] = mat_add(mat_mul(uinv, mat_mul(m.mats[i], u)),
                            mat_mul(uinv, derive_mat(m, u, i)));
    r.validate();
    return r;
}

long GoodModel::rank() const {
    long d = 0;
    for (auto& t : terms) d += t.rank;
    return d;
}

void GoodModel::validate() const {
    if (nvars < 1 || poles < 0 || poles > nvars)
        fail(errc::shape_mismatch, "variable and pole counts are inconsistent");
    if (terms.empty()) fail(errc::shape_mismatch, "a model needs at least one term");
    for (auto& t : terms) {
        if (t.rank < 1) fail(errc::shape_mismatch, "term rank must be positive");
        if (t.phi.nvars() != nvars)
            fail(errc::shape_mismatch, "twist has the wrong variable count");
        check_pole_locations(t.phi, poles, "twist has a pole outside the divisor");
        if (static_cast<long>(t.blocks.size()) != poles)
            fail(errc::shape_mismatch, "one log block per pole variable required");
        for (auto& b : t.blocks)
            if (mat_rows(b) != t.rank || mat_cols(b) != t.rank)
                fail(errc::shape_mismatch, "log block shape disagrees with the term rank");
        for (size_t i = 0; i < t.blocks.size(); ++i)
            for (size_t j = i + 1; j < t.blocks.size(); ++j)
                if (mat_mul(t.blocks[i], t.blocks[j]) != mat_mul(t.blocks[j], t.blocks[i]))
                    fail(errc::invariant_violation, "log blocks of a term must commute");
        for (auto& b : t.blocks)
            if (auto ob = prepared_obstruction(b))
                fail(errc::invariant_violation, "log block is not prepared: " + *ob);
    }
}

DiffModule realize(const GoodModel& g) {
    g.validate();
    DiffModule m;
    m.nvars = g.nvars;
    m.poles = g.poles;
    m.rank = g.rank();
    for (int i = 0; i < g.nvars; ++i) {
        Mat<LaurentPoly> n(m.rank, std::vector<LaurentPoly>(m.rank, LaurentPoly(g.nvars)));
        long off = 0;
        for (auto& t : g.terms) {
            LaurentPoly dphi = m.derive(t.phi, i);
            for (long r = 0; r < t.rank; ++r) {
                n[off + r][off + r] = n[off + r][off + r] + dphi;
                if (i < g.poles)
                    for (long c = 0; c < t.rank; ++c)
                        if (t.blocks[i][r][c] != 0)
                            n[off + r][off + c] =
                                n[off + r][off + c] +
                                LaurentPoly::constant(g.nvars, t.blocks[i][r][c]);
            }
            off += t.rank;
        }
        m.mats.push_back(std::move(n));
    }
    return m;
}

namespace {

// phi = x^e * u with e the nonpositive pole exponents; goodness asks u to be
// a unit of the power series ring.
LaurentPoly pole_cofactor(const LaurentPoly& phi, int poles) {
    LaurentPoly::Exp shift(phi.nvars(), 0);
    for (int j = 0; j < poles; ++j) {
        int mn = 0;
        for (auto& [e, c] : phi.terms()) mn = std::min(mn, e[j]);
        shift[j] = -mn;
    }
    return phi * LaurentPoly::monomial(phi.nvars(), shift, Rat(1));
}

} // namespace

GoodnessReport check_good(const GoodModel& g) {
    GoodnessReport rep;
    bool pair_ok = true;
    rep.admissible = true;
    for (size_t a = 0; a < g.terms.size(); ++a) {
        const LaurentPoly& phi = g.terms[a].phi;
        if (phi.pole_free()) continue;
        LaurentPoly u = pole_cofactor(phi, g.poles);
        if (!u.is_unit()) {
            rep.admissible = false;
            rep.violations.push_back({{a}, u, "not-monomial-unit"});
        }
    }
    for (size_t a = 0; a < g.terms.size(); ++a)
        for (size_t b = a + 1; b < g.terms.size(); ++b) {
            LaurentPoly diff = g.terms[a].phi - g.terms[b].phi;
            if (diff.pole_free()) continue;
            LaurentPoly u = pole_cofactor(diff, g.poles);
            if (!u.is_unit()) {
                pair_ok = false;
                rep.violations.push_back({{a, b}, u, "difference-not-monomial-unit"});
            }
        }
    rep.good = rep.admissible && pair_ok;
    return rep;
}

GoodModel minimalize(const GoodModel& g) {
    g.validate();
    GoodModel out;
    out.nvars = g.nvars;
    out.poles = g.poles;
    std::vector<std::vector<size_t>> groups;
    for (size_t i = 0; i < g.terms.size(); ++i) {
        bool placed = false;
        for (auto& grp : groups)
            if ((g.terms[i].phi - g.terms[grp[0]].phi).pole_free()) {
                grp.push_back(i);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({i});
    }
    for (auto& grp : groups) {
        GoodTerm merged;
        merged.phi = g.terms[grp[0]].phi;
        for (size_t i : grp) merged.rank += g.terms[i].rank;
        for (int v = 0; v < g.poles; ++v) {
            Mat<Rat> b(merged.rank, std::vector<Rat>(merged.rank, Rat(0)));
            long off = 0;
            for (size_t i : grp) {
                const Mat<Rat>& c = g.terms[i].blocks[v];
                for (long r = 0; r < g.terms[i].rank; ++r)
                    for (long s = 0; s < g.terms[i].rank; ++s) b[off + r][off + s] = c[r][s];
                off += g.terms[i].rank;
            }
            if (auto ob = prepared_obstruction(b))
                fail(errc::invariant_violation,
                     "merging regular twists breaks prepared eigenvalues: " + *ob);
            merged.blocks.push_back(std::move(b));
        }
        out.terms.push_back(std::move(merged));
    }
    out.validate();
    return out;
}

Twist module_twist(const DiffModule& m) {
    if (m.nvars != 1) fail(errc::shape_mismatch, "a one-variable module is required");
    return m.poles == 1 ? Twist::tddt : Twist::ddt;
}

namespace {

std::vector<LaurentPoly> nabla_apply(const DiffModule& m, const std::vector<LaurentPoly>& v) {
    std::vector<LaurentPoly> w = mat_vec(m.mats[0], v);
    for (size_t i = 0; i < v.size(); ++i)
        w[i] = w[i] + (m.poles == 1 ? v[i].dlog(0) : v[i].dstd(0));
    return w;
}

struct CyclicData {
    LaurentPoly det;
    std::vector<LaurentPoly> num; // numerators of the monic relation constants
};

std::optional<CyclicData> try_cyclic(const DiffModule& m, std::vector<LaurentPoly> w) {
    long d = m.rank;
    Mat<LaurentPoly> basis(d, std::vector<LaurentPoly>(d, LaurentPoly(1)));
    for (long k = 0; k < d; ++k) {
        for (long i = 0; i < d; ++i) basis[i][k] = w[i];
        w = nabla_apply(m, w);
    }
    std::vector<LaurentPoly> b(d);
    for (long i = 0; i < d; ++i) b[i] = -w[i];
    LinearSolution sol = lp_cramer(basis, b);
    if (sol.det.is_zero()) return std::nullopt;
    return CyclicData{std::move(sol.det), std::move(sol.num)};
}

std::vector<LaurentPoly> cyclic_candidate(long d, int attempt, std::mt19937_64& rng) {
    std::vector<LaurentPoly> c(d, LaurentPoly(1));
    if (attempt < d) {
        c[attempt] = lp_one(1);
    } else if (attempt == d) {
        for (long i = 0; i < d; ++i)
            c[i] = LaurentPoly::monomial(1, {static_cast<int>(i)}, Rat(1));
    } else {
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
                long coef = static_cast<long>(rng() % 5) - 2;
                if (coef != 0)
                    c[i] = c[i] + LaurentPoly::monomial(1, {static_cast<int>(j)}, Rat(coef));
            }
    }
    return c;
}

CyclicData cyclic_search(const DiffModule& m, uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    int budget = 50 + static_cast<int>(m.rank);
    for (int attempt = 0; attempt < budget; ++attempt)
        if (auto cd = try_cyclic(m, cyclic_candidate(m.rank, attempt, rng))) return *cd;
    fail(errc::cyclic_search_failed, "no cyclic vector found; retry with another seed");
}

// Exact when the determinant is a unit monomial, else a justified expansion.
TruncSeries laurent_quotient(const LaurentPoly& num, const LaurentPoly& det, long prec) {
    if (num.is_zero()) return TruncSeries();
    if (det.terms().size() == 1) {
        auto [e, c] = *det.terms().begin();
        return TruncSeries::from_laurent(
            num * LaurentPoly::monomial(1, {-e[0]}, Rat(1) / c));
    }
    return TruncSeries::from_laurent(num).div(TruncSeries::from_laurent(det), prec);
}

} // namespace

TwistedPoly cyclic_vector(const DiffModule& m, long prec, uint64_t seed) {
    m.validate();
    Twist tw = module_twist(m);
    CyclicData cd = cyclic_search(m, seed);
    std::vector<TruncSeries> coeffs(m.rank + 1);
    for (long k = 0; k < m.rank; ++k) coeffs[k] = laurent_quotient(cd.num[k], cd.det, prec);
    coeffs[m.rank] = TruncSeries(Rat(1));
    return TwistedPoly(tw, std::move(coeffs));
}

namespace {

std::vector<std::vector<long>> diagonal_blocks(const Mat<LaurentPoly>& n) {
    long d = mat_rows(n);
    std::vector<long> parent(d);
    for (long i = 0; i < d; ++i) parent[i] = i;
    std::function<long(long)> find = [&](long i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            if (i != j && (!n[i][j].is_zero() || !n[j][i].is_zero()))
                parent[find(i)] = find(j);
    std::map<long, std::vector<long>> comps;
    for (long i = 0; i < d; ++i) comps[find(i)].push_back(i);
    std::vector<std::vector<long>> out;
    for (auto& [root, idx] : comps) out.push_back(idx);
    return out;
}

} // namespace

std::vector<Rat> module_slopes(const DiffModule& m) {
    m.validate();
    module_twist(m);
    std::vector<Rat> out;
    for (auto& idx : diagonal_blocks(m.mats[0])) {
        DiffModule sub;
        sub.nvars = 1;
        sub.poles = m.poles;
        sub.rank = static_cast<long>(idx.size());
        Mat<LaurentPoly> n(sub.rank, std::vector<LaurentPoly>(sub.rank, LaurentPoly(1)));
        for (long r = 0; r < sub.rank; ++r)
            for (long c = 0; c < sub.rank; ++c) n[r][c] = m.mats[0][idx[r]][idx[c]];
        sub.mats = {std::move(n)};
        CyclicData cd = cyclic_search(sub, 0);
        long v0 = cd.det.min_exp(0);
        std::vector<std::optional<Rat>> vals(sub.rank + 1);
        for (long k = 0; k < sub.rank; ++k)
            if (!cd.num[k].is_zero()) vals[k] = Rat(cd.num[k].min_exp(0) - v0);
        vals[sub.rank] = Rat(0);
        auto s = slopes_from_valuations(vals);
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Rat> scale_multiset(const DiffModule& m, const Rat& s) {
    std::vector<Rat> f = module_slopes(m);
    for (Rat& x : f) x = std::max(x, s);
    std::sort(f.rbegin(), f.rend());
    return f;
}

ScaleFiltration scale_filtration(const DiffModule& m, long prec, uint64_t seed) {
    ScaleFiltration out;
    out.cyclic = cyclic_vector(m, prec, seed);
    Twist tw = out.cyclic.twist;

    // An exactly-zero bottom coefficient is a right factor T^strip of slope 0;
    // the factorizer wants a nonzero constant term.
    long strip = 0;
    while (strip <= out.cyclic.deg() && out.cyclic.coeff(strip).known_zero()) ++strip;
    TwistedPoly q;
    q.twist = tw;
    q.c.assign(out.cyclic.c.begin() + strip, out.cyclic.c.end());
    if (q.deg() >= 1) out.factors = slope_factor(q, prec);
    if (strip > 0) {
        std::vector<TruncSeries> tk(strip + 1);
        tk[strip] = TruncSeries(Rat(1));
        TwistedPoly tpow(tw, std::move(tk));
        if (!out.factors.empty() && full_slopes(out.factors.back()).front() == Rat(0))
            out.factors.back() = tw_mul(out.factors.back(), tpow);
        else
            out.factors.push_back(std::move(tpow));
    }
    for (auto& f : out.factors) {
        auto s = full_slopes(f);
        for (size_t i = 1; i < s.size(); ++i)
            if (s[i] != s[0]) fail(errc::internal_error, "slope factor is not pure");
        out.graded_slopes.push_back(s[0]);
    }
    long k = static_cast<long>(out.factors.size());
    std::vector<TwistedPoly> tails(k);
    TwistedPoly acc(tw, {TruncSeries(Rat(1))});
    for (long j = k - 1; j >= 0; --j) {
        tails[j] = acc;
        acc = tw_mul(out.factors[j], acc);
    }
    long dim = 0;
    for (long j = 0; j < k; ++j) {
        dim += out.factors[j].deg();
        std::vector<TwistedPoly> basis;
        for (long i = 0; i < dim; ++i) {
            std::vector<TruncSeries> tpow(i + 1);
            tpow[i] = TruncSeries(Rat(1));
            basis.push_back(tw_mul(TwistedPoly(tw, std::move(tpow)), tails[j]));
        }
        out.steps.push_back(std::move(basis));
    }
    return out;
}

Mat<TruncSeries> descend_gauge(const Mat<TruncSeries>& n, long prec) {
    long d = mat_rows(n);
    if (d < 1 || mat_cols(n) != d) fail(errc::shape_mismatch, "a square matrix is required");
    if (prec < 1) fail(errc::precondition_violated, "precision must be positive");
    long attested = prec;
    for (auto& row : n)
        for (auto& e : row) {
            attested = std::min(attested, e.prec());
            if (!e.known_range_empty() && *e.val() < 0)
                fail(errc::precondition_violated, "connection matrix has a pole");
        }
    if (attested < prec)
        fail(errc::precision_loss, "input windows do not justify the requested precision");

    Mat<Rat> n0(d, std::vector<Rat>(d));
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) n0[i][j] = n[i][j].coeff(0);

    Mat<Rat> idd(d, std::vector<Rat>(d, Rat(0)));
    for (long i = 0; i < d; ++i) idd[i][i] = Rat(1);
    Mat<Rat> ad = mat_sub(kron(n0, idd), kron(idd, mat_transpose(n0)));

    std::vector<Mat<Rat>> u{idd};
    for (long step = 1; step < attested; ++step) {
        Mat<Rat> rhs(d, std::vector<Rat>(d, Rat(0)));
        for (long j = 1; j <= step; ++j) {
            Mat<Rat> nj(d, std::vector<Rat>(d));
            for (long r = 0; r < d; ++r)
                for (long c = 0; c < d; ++c) nj[r][c] = n[r][c].coeff(static_cast<int>(j));
            rhs = mat_sub(rhs, mat_mul(nj, u[step - j]));
        }
        Mat<Rat> sys = ad;
        for (long i = 0; i < d * d; ++i) sys[i][i] += Rat(step);
        std::vector<Rat> vec(d * d);
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c) vec[r * d + c] = rhs[r][c];
        auto sol = q_solve_unique(sys, vec);
        if (!sol)
            fail(errc::unprepared_eigenvalues,
                 "descent blocked at order " + std::to_string(step) +
                     ": an eigenvalue gap is that integer");
        Mat<Rat> ui(d, std::vector<Rat>(d));
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c) ui[r][c] = (*sol)[r * d + c];
        u.push_back(std::move(ui));
    }

    Mat<TruncSeries> out(d, std::vector<TruncSeries>(d));
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) {
            TruncSeries s = TruncSeries::zero_known_to(attested);
            for (long step = 0; step < attested; ++step)
                if (u[step][r][c] != 0)
                    s = s + TruncSeries::monomial(static_cast<int>(step), u[step][r][c]);
            out[r][c] = s;
        }
    return out;
}

Rat admissible_section(const Rat& lambda) { return lambda - Rat(rat_floor(lambda)); }

} // namespace merom
