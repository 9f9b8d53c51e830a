#include "merom/irregularity.hpp"

#include <algorithm>
#include <random>

namespace merom {

namespace {

uint64_t weight_hash(const std::vector<long>& a) {
    uint64_t h = 1469598103934665603ULL;
    for (long v : a) h = h * 1000003ULL + uint64_t(v);
    return h;
}

// Memoizes irr_at across the weights one certificate touches; each weight gets
// its own derived seed so caching does not change the draws.
struct IrrSampler {
    const DiffModule& m;
    uint64_t seed;
    std::map<std::vector<long>, Rat> cache;

    const Rat& operator()(const std::vector<long>& a) {
        auto it = cache.find(a);
        if (it == cache.end())
            it = cache.emplace(a, irr_at_robust(m, a, seed ^ weight_hash(a))).first;
        return it->second;
    }
};

void check_weights(const DiffModule& m, const std::vector<long>& a) {
    if (a.size() != size_t(m.nvars))
        fail(errc::shape_mismatch, "one weight per variable required");
    for (long v : a)
        if (v <= 0) fail(errc::precondition_violated, "weights must be positive");
}

void append_hinge(PLFunction& f, long weight, const std::vector<long>& a) {
    if (std::all_of(a.begin(), a.end(), [](long v) { return v == 0; })) return;
    f.terms.push_back({weight, a});
}

void require_admissible(const GoodModel& g) {
    if (!check_good(g).admissible)
        fail(errc::invariant_violation, "irregularity needs an admissible model");
}

void enumerate_weights(int nvars, long budget, std::vector<long>& cur,
                       std::vector<std::vector<long>>& out) {
    if (int(cur.size()) == nvars) {
        out.push_back(cur);
        return;
    }
    for (long v = 1; v - 1 <= budget; ++v) {
        cur.push_back(v);
        enumerate_weights(nvars, budget - (v - 1), cur, out);
        cur.pop_back();
    }
}

} // namespace

Rat PLFunction::eval(const std::vector<Rat>& r) const {
    if (r.size() != size_t(nvars))
        fail(errc::shape_mismatch, "evaluation point has the wrong arity");
    Rat total(0);
    for (const auto& t : terms) {
        Rat s(0);
        for (int i = 0; i < nvars; ++i) s += r[i] * t.a[i];
        if (sgn(s) > 0) total += s * t.weight;
    }
    return total;
}

ValueElt PLFunction::eval(const std::vector<ValueElt>& r) const {
    if (r.size() != size_t(nvars))
        fail(errc::shape_mismatch, "evaluation point has the wrong arity");
    ValueElt total;
    for (const auto& t : terms) {
        ValueElt s;
        for (int i = 0; i < nvars; ++i) s += r[i] * Rat(t.a[i]);
        if (sign(s) > 0) total += s * Rat(t.weight);
    }
    return total;
}

PLFunction irr_good(const GoodModel& g) {
    require_admissible(g);
    PLFunction f;
    f.nvars = g.nvars;
    for (const auto& t : g.terms) {
        if (t.phi.is_zero() || t.phi.pole_free()) continue;
        LaurentPoly::Exp e = t.phi.min_exponents();
        std::vector<long> a(e.size());
        for (size_t i = 0; i < e.size(); ++i) a[i] = -long(e[i]);
        append_hinge(f, t.rank, a);
    }
    return f;
}

PLFunction end_irr_good(const GoodModel& g) {
    require_admissible(g);
    PLFunction f;
    f.nvars = g.nvars;
    for (size_t alpha = 0; alpha < g.terms.size(); ++alpha)
        for (size_t beta = 0; beta < g.terms.size(); ++beta) {
            if (alpha == beta) continue;
            LaurentPoly psi = g.terms[alpha].phi - g.terms[beta].phi;
            if (psi.is_zero() || psi.pole_free()) continue;
            long w = g.terms[alpha].rank * g.terms[beta].rank;
            LaurentPoly::Exp e = psi.min_exponents();
            LaurentPoly::Exp neg(e.size());
            for (size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
            LaurentPoly u = psi * LaurentPoly::monomial(g.nvars, neg, Rat(1));
            std::vector<long> top(neg.begin(), neg.end());
            if (u.terms().size() == 1) {
                append_hinge(f, w, top);
                continue;
            }
            if (u.terms().size() != 2)
                fail(errc::not_implemented,
                     "End irregularity is not a sum of hinge terms");
            auto first = u.terms().begin();
            auto second = std::next(first);
            const LaurentPoly::Exp* fj = nullptr;
            const LaurentPoly::Exp* fk = nullptr;
            for (const auto* cand : {&first->first, &second->first}) {
                bool below = true;
                for (size_t i = 0; i < neg.size(); ++i)
                    below = below && (*cand)[i] <= neg[i];
                if (below) {
                    fj = cand;
                    fk = cand == &first->first ? &second->first : &first->first;
                    break;
                }
            }
            if (!fj)
                fail(errc::not_implemented,
                     "End irregularity is not a sum of hinge terms");
            std::vector<long> outer(neg.size()), inner(neg.size());
            for (size_t i = 0; i < neg.size(); ++i) {
                outer[i] = long(neg[i]) - long((*fj)[i]);
                inner[i] = long((*fj)[i]) - long((*fk)[i]);
            }
            append_hinge(f, w, outer);
            append_hinge(f, w, inner);
        }
    return f;
}

DiffModule restrict_to_curve(const DiffModule& m, const std::vector<Rat>& c,
                             const std::vector<long>& a) {
    m.validate();
    check_weights(m, a);
    if (c.size() != size_t(m.nvars))
        fail(errc::shape_mismatch, "one curve constant per variable required");
    for (const Rat& v : c)
        if (sgn(v) == 0) fail(errc::zero_input, "curve constants must be nonzero");
    Mat<LaurentPoly> n(m.rank, std::vector<LaurentPoly>(m.rank, LaurentPoly(1)));
    for (int i = 0; i < m.nvars; ++i) {
        LaurentPoly scale =
            i < m.poles
                ? LaurentPoly::constant(1, Rat(a[i]))
                : LaurentPoly::monomial(1, {int(a[i])}, c[i] * long(a[i]));
        for (int r = 0; r < m.rank; ++r)
            for (int s = 0; s < m.rank; ++s)
                n[r][s] = n[r][s] + m.mats[i][r][s].subst_curve(c, a) * scale;
    }
    DiffModule out;
    out.nvars = 1;
    out.poles = 1;
    out.rank = m.rank;
    out.mats.push_back(std::move(n));
    return out;
}

namespace {

Rat irr_at_range(const DiffModule& m, const std::vector<long>& a, uint64_t seed,
                 uint64_t range) {
    check_weights(m, a);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Rat> tries;
    for (int trial = 0; trial < 2; ++trial) {
        std::vector<Rat> c(m.nvars);
        for (Rat& v : c) v = Rat(2 + long(rng() % range));
        Rat irr(0);
        for (const Rat& s : module_slopes(restrict_to_curve(m, c, a)))
            if (sgn(s) > 0) irr += s;
        tries.push_back(irr);
    }
    if (tries[0] != tries[1])
        fail(errc::genericity_failure,
             "curve restrictions disagree between constant draws");
    return tries[0];
}

} // namespace

Rat irr_at(const DiffModule& m, const std::vector<long>& a, uint64_t seed) {
    return irr_at_range(m, a, seed, 16);
}

Rat irr_at_robust(const DiffModule& m, const std::vector<long>& a, uint64_t seed,
                  int attempts) {
    if (attempts < 1) fail(errc::precondition_violated, "at least one attempt required");
    for (int k = 0;; ++k) {
        try {
            return irr_at_range(m, a, seed ^ (0x517cc1b727220a95ULL * uint64_t(k)),
                                uint64_t(16) << std::min(4 * k, 48));
        } catch (const error& e) {
            if (e.code() != errc::genericity_failure || k + 1 >= attempts) throw;
        }
    }
}

NumericalityCertificate is_numerical(const DiffModule& m, long degree_bound,
                                     uint64_t seed) {
    m.validate();
    std::vector<std::vector<long>> samples;
    std::vector<long> cur;
    enumerate_weights(m.nvars, std::max<long>(2, degree_bound), cur, samples);
    IrrSampler f{m, seed, {}};

    Mat<Rat> rows;
    std::vector<Rat> rhs;
    for (const auto& a : samples) {
        std::vector<Rat> row(m.nvars);
        for (int i = 0; i < m.nvars; ++i) row[i] = Rat(a[i]);
        rows.push_back(std::move(row));
        rhs.push_back(f(a));
    }

    NumericalityCertificate cert;
    if (auto sol = q_solve(rows, rhs)) {
        bool exact = true;
        for (size_t k = 0; exact && k < samples.size(); ++k) {
            Rat dot(0);
            for (int i = 0; i < m.nvars; ++i) dot += (*sol)[i] * samples[k][i];
            exact = dot == rhs[k];
        }
        if (exact) {
            cert.numerical = true;
            cert.functional = *sol;
            return cert;
        }
    }

    for (size_t i = 0; i < samples.size(); ++i)
        for (size_t j = i; j < samples.size(); ++j) {
            std::vector<long> sum(m.nvars);
            for (int k = 0; k < m.nvars; ++k)
                sum[k] = samples[i][k] + samples[j][k];
            if (f(samples[i]) + f(samples[j]) != f(sum)) {
                cert.witness_u = samples[i];
                cert.witness_v = samples[j];
                return cert;
            }
        }
    fail(errc::internal_error,
         "irregularity is nonlinear on the samples yet additive on all pairs");
}

TurningReport turning_test(const DiffModule& m, long degree_bound, uint64_t seed) {
    TurningReport rep;
    rep.module_cert = is_numerical(m, degree_bound, seed);
    rep.end_cert = is_numerical(end_module(m), degree_bound, seed + 1);
    rep.pass = rep.module_cert.numerical && rep.end_cert.numerical;
    return rep;
}

ConvexityReport convexity_audit(const DiffModule& m, int samples, uint64_t seed) {
    m.validate();
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
    IrrSampler f{m, seed, {}};
    ConvexityReport rep;
    for (int trial = 0; trial < samples; ++trial) {
        std::vector<long> u(m.nvars), v(m.nvars), sum(m.nvars);
        for (long& x : u) x = 1 + long(rng() % 4);
        for (long& x : v) x = 1 + long(rng() % 4);
        for (int i = 0; i < m.nvars; ++i) sum[i] = u[i] + v[i];
        if (f(u) + f(v) < f(sum)) {
            rep.convex = false;
            rep.witness_u = u;
            rep.witness_v = v;
            return rep;
        }
        for (int j = m.poles; j < m.nvars; ++j) {
            std::vector<long> up = u;
            std::vector<long> upp = u;
            up[j] += 1;
            upp[j] += 2;
            if (f(u) < f(up) || f(up) < f(upp)) {
                rep.monotone = false;
                rep.witness_u = u;
                rep.witness_v = upp;
                return rep;
            }
        }
    }
    return rep;
}

} // namespace merom
