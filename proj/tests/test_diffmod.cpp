#include "doctest.h"

#include <random>

#include "merom/diffmod.hpp"

using namespace merom;

namespace {

LaurentPoly mono2(int e1, int e2, long num, long den = 1) {
    return LaurentPoly::monomial(2, {e1, e2}, rat(num, den));
}

LaurentPoly mono1(int e, long num, long den = 1) {
    return LaurentPoly::monomial(1, {e}, rat(num, den));
}

LaurentPoly zero2() { return LaurentPoly(2); }

// E(t^-1) (+) E(0) over Q((t)) with the log derivation, the standard
// two-slope module.
DiffModule two_slope() {
    DiffModule m;
    m.nvars = 1;
    m.poles = 1;
    m.rank = 2;
    Mat<LaurentPoly> n{{mono1(-1, -1), LaurentPoly(1)}, {LaurentPoly(1), LaurentPoly(1)}};
    m.mats = {n};
    return m;
}

Mat<Rat> qm(std::vector<std::vector<long>> rows) {
    Mat<Rat> a(rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (long v : rows[i]) a[i].push_back(Rat(v));
    return a;
}

bool all_zero_to(const TruncSeries& s, long p) {
    if (s.prec() < p) return false;
    for (auto& [k, c] : s.known())
        if (k < p && c != 0) return false;
    return true;
}

// Residual of the descent equation N U + t dU/dt - U N0, checked entrywise.
Mat<TruncSeries> descent_residual(const Mat<TruncSeries>& n, const Mat<TruncSeries>& u,
                                  const Mat<Rat>& n0) {
    size_t d = n.size();
    Mat<TruncSeries> r(d, std::vector<TruncSeries>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            TruncSeries acc = u[i][j].dlog();
            for (size_t k = 0; k < d; ++k) {
                acc = acc + n[i][k] * u[k][j];
                acc = acc - u[i][k] * TruncSeries(n0[k][j]);
            }
            r[i][j] = acc;
        }
    return r;
}

} // namespace

TEST_CASE("rational linear algebra solves and factors characteristic polynomials") {
    Mat<Rat> a = qm({{2, 1}, {0, 3}});
    auto x = q_solve_unique(a, {Rat(5), Rat(9)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rat(1));
    CHECK((*x)[1] == Rat(3));

    auto cp = charpoly(a);
    REQUIRE(cp.size() == 3);
    CHECK(cp[0] == Rat(6));
    CHECK(cp[1] == Rat(-5));
    CHECK(cp[2] == Rat(1));

    Mat<Rat> sing = qm({{1, 2}, {2, 4}});
    CHECK(!q_solve_unique(sing, {Rat(1), Rat(1)}).has_value());
    auto ker = q_kernel(sing);
    REQUIRE(ker.size() == 1);
    CHECK(ker[0][0] * Rat(1) + ker[0][1] * Rat(2) == 0);

    auto inv = q_inverse(a);
    REQUIRE(inv.has_value());
    auto prod = mat_mul(*inv, a);
    CHECK(prod[0][0] == Rat(1));
    CHECK(prod[0][1] == Rat(0));
    CHECK(prod[1][1] == Rat(1));
}

TEST_CASE("prepared eigenvalue obstructions are detected exactly") {
    CHECK(!prepared_obstruction(qm({{0, 1}, {0, 0}})).has_value());
    CHECK(!prepared_obstruction(Mat<Rat>{{rat(1, 2)}}).has_value());
    CHECK(prepared_obstruction(Mat<Rat>{{Rat(1)}}).has_value());
    CHECK(prepared_obstruction(qm({{0, 0}, {0, 1}})).has_value());
    Mat<Rat> gap{{rat(1, 4), Rat(0)}, {Rat(0), rat(5, 4)}};
    CHECK(prepared_obstruction(gap).has_value());
    Mat<Rat> ok{{Rat(0), Rat(0)}, {Rat(0), rat(1, 2)}};
    CHECK(!prepared_obstruction(ok).has_value());
}

TEST_CASE("Laurent determinants and Cramer certificates") {
    Mat<LaurentPoly> a{{mono1(1, 1), mono1(0, 1)}, {mono1(0, 1), mono1(-1, 1)}};
    CHECK(lp_det(a).is_zero());

    Mat<LaurentPoly> b{{mono1(0, 1), mono1(1, 1)}, {mono1(-1, 1), mono1(1, 1)}};
    CHECK(lp_det(b) == mono1(1, 1) - mono1(0, 1));

    std::vector<LaurentPoly> rhs{mono1(0, 2), mono1(1, 3)};
    auto sol = lp_cramer(b, rhs);
    CHECK(!sol.det.is_zero());
    for (size_t i = 0; i < 2; ++i) {
        LaurentPoly acc(1);
        for (size_t j = 0; j < 2; ++j) acc = acc + b[i][j] * sol.num[j];
        CHECK(acc == sol.det * rhs[i]);
    }
}

TEST_CASE("slope multisets from exact valuations match the series polygon") {
    std::vector<std::optional<Rat>> vals{Rat(-1), Rat(-1), Rat(0)};
    auto s = slopes_from_valuations(vals);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Rat(0));
    CHECK(s[1] == Rat(1));

    std::vector<std::optional<Rat>> stripped{std::nullopt, Rat(-1), Rat(0)};
    auto s2 = slopes_from_valuations(stripped);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0] == Rat(0));
    CHECK(s2[1] == Rat(1));

    std::vector<std::optional<Rat>> hole{Rat(-2), std::nullopt, Rat(0)};
    auto s3 = slopes_from_valuations(hole);
    REQUIRE(s3.size() == 2);
    CHECK(s3[0] == Rat(1));
    CHECK(s3[1] == Rat(1));
}

TEST_CASE("twist modules carry the log derivative of the exponent") {
    LaurentPoly phi = mono2(-1, 0, 1);
    DiffModule m = e_phi(phi, 2, 1);
    CHECK(m.rank == 1);
    CHECK(m.mats[0][0][0] == mono2(-1, 0, -1));
    CHECK(m.mats[1][0][0].is_zero());
    CHECK(is_integrable(m));

    DiffModule triv = e_phi(LaurentPoly(2), 2, 1);
    CHECK(triv.mats[0][0][0].is_zero());
    CHECK(triv.mats[1][0][0].is_zero());

    CHECK_THROWS_AS(e_phi(mono2(0, -1, 1), 2, 1), error);
}

TEST_CASE("rank-one twists add under tensor and cancel under end") {
    LaurentPoly phi = mono2(-2, 0, 1), psi = mono2(0, -1, 3);
    DiffModule t = tensor(e_phi(phi, 2, 2), e_phi(psi, 2, 2));
    DiffModule s = e_phi(phi + psi, 2, 2);
    CHECK(t.mats[0][0][0] == s.mats[0][0][0]);
    CHECK(t.mats[1][0][0] == s.mats[1][0][0]);

    DiffModule d = dual(e_phi(phi, 2, 2));
    CHECK(d.mats[0][0][0] == e_phi(-phi, 2, 2).mats[0][0][0]);

    DiffModule e = end_module(e_phi(phi, 2, 2));
    CHECK(e.rank == 1);
    CHECK(e.mats[0][0][0].is_zero());
    CHECK(e.mats[1][0][0].is_zero());
}

TEST_CASE("top exterior power is the trace line") {
    DiffModule m;
    m.nvars = 1;
    m.poles = 1;
    m.rank = 2;
    m.mats = {{{mono1(-1, 1), mono1(2, 5)}, {mono1(0, 7), mono1(1, 3)}}};
    DiffModule top = exterior_power(m, 2);
    CHECK(top.rank == 1);
    CHECK(top.mats[0][0][0] == mono1(-1, 1) + mono1(1, 3));

    DiffModule first = exterior_power(m, 1);
    CHECK(first.mats[0] == m.mats[0]);
}

TEST_CASE("end of a split pair contains both difference twists") {
    LaurentPoly phi = mono2(-1, 0, 1), psi = mono2(0, -1, 1);
    DiffModule m = direct_sum(e_phi(phi, 2, 2), e_phi(psi, 2, 2));
    DiffModule e = end_module(m);
    REQUIRE(e.rank == 4);
    DiffModule diff = e_phi(phi - psi, 2, 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(e.mats[i][1][1] == diff.mats[i][0][0]);
        CHECK(e.mats[i][2][2] == -diff.mats[i][0][0]);
        CHECK(e.mats[i][0][0].is_zero());
        CHECK(e.mats[i][3][3].is_zero());
        for (size_t r = 0; r < 4; ++r)
            for (size_t c = 0; c < 4; ++c)
                if (r != c) CHECK(e.mats[i][r][c].is_zero());
    }
    CHECK(is_integrable(e));
}

TEST_CASE("integrability check rejects a noncommuting pair") {
    DiffModule m;
    m.nvars = 2;
    m.poles = 0;
    m.rank = 2;
    Mat<LaurentPoly> n1{{zero2(), mono2(0, 0, 1)}, {zero2(), zero2()}};
    Mat<LaurentPoly> n2{{zero2(), zero2()}, {mono2(0, 0, 1), zero2()}};
    m.mats = {n1, n2};
    CHECK(!is_integrable(m));
}

TEST_CASE("realized good models twist the regular log action") {
    GoodModel g;
    g.nvars = 1;
    g.poles = 1;
    g.terms = {{mono1(-1, 1), 1, {Mat<Rat>{{rat(1, 2)}}}}};
    DiffModule m = realize(g);
    CHECK(m.rank == 1);
    CHECK(m.mats[0][0][0] == mono1(-1, -1) + mono1(0, 1, 2));

    GoodModel h;
    h.nvars = 1;
    h.poles = 1;
    h.terms = {{LaurentPoly(1), 1, {Mat<Rat>{{Rat(0)}}}}};
    CHECK(realize(h).mats[0][0][0].is_zero());

    g.terms.push_back(h.terms[0]);
    DiffModule two = realize(g);
    CHECK(two.rank == 2);
    CHECK(two.mats[0][0][1].is_zero());
    CHECK(two.mats[0][1][0].is_zero());
    CHECK(two.mats[0][1][1].is_zero());
}

TEST_CASE("realize validates commutation and preparedness") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 2;
    GoodTerm t;
    t.phi = mono2(-1, 0, 1);
    t.rank = 2;
    t.blocks = {qm({{0, 1}, {0, 0}}), qm({{0, 0}, {1, 0}})};
    g.terms = {t};
    CHECK_THROWS_AS(realize(g), error);

    t.blocks = {qm({{0, 1}, {0, 0}}), qm({{1, 0}, {0, 1}})};
    g.terms = {t};
    CHECK_THROWS_AS(realize(g), error);

    t.blocks[1] = Mat<Rat>{{rat(1, 2), Rat(0)}, {Rat(0), rat(1, 2)}};
    g.terms = {t};
    DiffModule m = realize(g);
    CHECK(m.rank == 2);
    CHECK(is_integrable(m));
}

TEST_CASE("goodness accepts a single monomial twist") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 1;
    g.terms = {{mono2(-1, 0, 1), 1, {Mat<Rat>{{Rat(0)}}}}};
    auto rep = check_good(g);
    CHECK(rep.admissible);
    CHECK(rep.good);
    CHECK(rep.violations.empty());
}

TEST_CASE("goodness fails on a two-pole sum with the cofactor as witness") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 2;
    g.terms = {{mono2(-1, 0, 1) + mono2(0, -1, 1), 1, {Mat<Rat>{{Rat(0)}}, Mat<Rat>{{Rat(0)}}}}};
    auto rep = check_good(g);
    CHECK(!rep.admissible);
    CHECK(!rep.good);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].reason == "not-monomial-unit");
    CHECK(rep.violations[0].witness == mono2(1, 0, 1) + mono2(0, 1, 1));
}

TEST_CASE("goodness separates admissible from good on a difference failure") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 2;
    g.terms = {{mono2(-1, 0, 1), 1, {Mat<Rat>{{Rat(0)}}, Mat<Rat>{{Rat(0)}}}},
               {mono2(0, -1, 1), 1, {Mat<Rat>{{Rat(0)}}, Mat<Rat>{{Rat(0)}}}}};
    auto rep = check_good(g);
    CHECK(rep.admissible);
    CHECK(!rep.good);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].reason == "difference-not-monomial-unit");
    CHECK(rep.violations[0].which == std::vector<size_t>{0, 1});
}

TEST_CASE("minimalize merges regular differences and stacks blocks") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 1;
    g.terms = {{mono2(-1, 0, 1), 1, {Mat<Rat>{{Rat(0)}}}},
               {mono2(-1, 0, 1) + mono2(0, 1, 1), 1, {Mat<Rat>{{rat(1, 2)}}}}};
    GoodModel min = minimalize(g);
    REQUIRE(min.terms.size() == 1);
    CHECK(min.terms[0].phi == mono2(-1, 0, 1));
    CHECK(min.terms[0].rank == 2);
    CHECK(min.terms[0].blocks[0][0][0] == Rat(0));
    CHECK(min.terms[0].blocks[0][0][1] == Rat(0));
    CHECK(min.terms[0].blocks[0][1][1] == rat(1, 2));

    GoodModel again = minimalize(min);
    CHECK(again.terms.size() == 1);
    CHECK(again.terms[0].phi == min.terms[0].phi);
    CHECK(again.terms[0].blocks == min.terms[0].blocks);
}

TEST_CASE("minimalize keeps genuinely distinct twists apart") {
    GoodModel g;
    g.nvars = 1;
    g.poles = 1;
    g.terms = {{mono1(-1, 1), 1, {Mat<Rat>{{Rat(0)}}}},
               {mono1(-1, 2), 1, {Mat<Rat>{{Rat(0)}}}}};
    GoodModel min = minimalize(g);
    CHECK(min.terms.size() == 2);
}

TEST_CASE("minimalize refuses a merge that breaks prepared eigenvalues") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 1;
    g.terms = {{mono2(-1, 0, 1), 1, {Mat<Rat>{{rat(1, 4)}}}},
               {mono2(-1, 0, 1) + mono2(0, 1, 1), 1, {Mat<Rat>{{rat(5, 4)}}}}};
    try {
        minimalize(g);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::invariant_violation);
    }
}

TEST_CASE("cyclic vector on rank one returns T minus the matrix entry") {
    DiffModule m;
    m.nvars = 1;
    m.poles = 1;
    m.rank = 1;
    LaurentPoly a = mono1(-1, 1) + mono1(1, 2);
    m.mats = {{{a}}};
    TwistedPoly p = cyclic_vector(m);
    REQUIRE(p.deg() == 1);
    CHECK(p.coeff(1) == TruncSeries(Rat(1)));
    CHECK(p.coeff(0) == TruncSeries::from_laurent(-a));
}

TEST_CASE("cyclic vector reads a companion module off directly") {
    DiffModule m;
    m.nvars = 1;
    m.poles = 1;
    m.rank = 2;
    LaurentPoly alpha = mono1(1, 1), beta = mono1(-1, 1);
    m.mats = {{{LaurentPoly(1), -beta}, {LaurentPoly::constant(1, Rat(1)), -alpha}}};
    TwistedPoly p = cyclic_vector(m);
    REQUIRE(p.deg() == 2);
    CHECK(p.coeff(0) == TruncSeries::from_laurent(beta));
    CHECK(p.coeff(1) == TruncSeries::from_laurent(alpha));
    CHECK(p.coeff(2) == TruncSeries(Rat(1)));
}

TEST_CASE("two-slope module yields slope multiset zero one") {
    auto s = module_slopes(two_slope());
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Rat(0));
    CHECK(s[1] == Rat(1));

    TwistedPoly p = cyclic_vector(two_slope());
    auto fs = full_slopes(p);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0] == Rat(0));
    CHECK(fs[1] == Rat(1));
}

TEST_CASE("scale multisets clamp slopes from below") {
    DiffModule e1;
    e1.nvars = 1;
    e1.poles = 1;
    e1.rank = 1;
    e1.mats = {{{mono1(-1, -1)}}};
    auto s = scale_multiset(e1, rat(1, 3));
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Rat(1));

    DiffModule triv;
    triv.nvars = 1;
    triv.poles = 1;
    triv.rank = 2;
    triv.mats = {{{LaurentPoly(1), LaurentPoly(1)}, {LaurentPoly(1), LaurentPoly(1)}}};
    auto st = scale_multiset(triv, rat(1, 3));
    REQUIRE(st.size() == 2);
    CHECK(st[0] == rat(1, 3));
    CHECK(st[1] == rat(1, 3));

    auto s2 = scale_multiset(two_slope(), rat(1, 3));
    REQUIRE(s2.size() == 2);
    CHECK(s2[0] == Rat(1));
    CHECK(s2[1] == rat(1, 3));
}

TEST_CASE("scale filtration grades the two-slope module") {
    ScaleFiltration f = scale_filtration(two_slope());
    REQUIRE(f.factors.size() == 2);
    REQUIRE(f.graded_slopes.size() == 2);
    CHECK(f.graded_slopes[0] == Rat(1));
    CHECK(f.graded_slopes[1] == Rat(0));
    REQUIRE(f.steps.size() == 2);
    CHECK(f.steps[0].size() == 1);
    CHECK(f.steps[1].size() == 2);
    for (auto& v : f.steps[0]) CHECK(v.deg() < 2);
    CHECK(tw_mul(f.factors[0], f.factors[1]).agrees_with(f.cyclic));

    DiffModule swapped;
    swapped.nvars = 1;
    swapped.poles = 1;
    swapped.rank = 2;
    swapped.mats = {{{LaurentPoly(1), LaurentPoly(1)}, {LaurentPoly(1), mono1(-1, -1)}}};
    ScaleFiltration fs = scale_filtration(swapped);
    CHECK(fs.graded_slopes == f.graded_slopes);

    DiffModule e1;
    e1.nvars = 1;
    e1.poles = 1;
    e1.rank = 1;
    e1.mats = {{{mono1(-1, -1)}}};
    ScaleFiltration single = scale_filtration(e1);
    CHECK(single.steps.size() == 1);
    CHECK(single.graded_slopes == std::vector<Rat>{Rat(1)});
}

TEST_CASE("descent gauge is the identity for constant matrices") {
    Mat<TruncSeries> n{{TruncSeries(Rat(0)), TruncSeries(Rat(1))},
                       {TruncSeries(Rat(0)), TruncSeries(rat(1, 2))}};
    auto u = descend_gauge(n, 10);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            CHECK(u[i][j].prec() == 10);
            if (i == j) CHECK(u[i][j].coeff(0) == Rat(1));
            for (int k = (i == j ? 1 : 0); k < 10; ++k) CHECK(u[i][j].coeff(k) == Rat(0));
        }
}

TEST_CASE("rank-one descent reproduces the exponential") {
    Mat<TruncSeries> n{{TruncSeries::monomial(1, Rat(3))}};
    long prec = 12;
    auto u = descend_gauge(n, prec);
    Rat expect(1);
    for (int k = 0; k < prec; ++k) {
        CHECK(u[0][0].coeff(k) == expect);
        expect = expect * rat(-3, k + 1);
    }
}

TEST_CASE("descent residual vanishes to attested precision") {
    Mat<Rat> n0 = {{Rat(0), Rat(0)}, {Rat(0), rat(1, 2)}};
    Mat<TruncSeries> n(2, std::vector<TruncSeries>(2));
    std::mt19937_64 rng(7);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            n[i][j] = TruncSeries(n0[i][j]);
            for (int k = 1; k <= 3; ++k) {
                long c = static_cast<long>(rng() % 7) - 3;
                if (c != 0) n[i][j] = n[i][j] + TruncSeries::monomial(k, Rat(c));
            }
        }
    long prec = 15;
    auto u = descend_gauge(n, prec);
    auto res = descent_residual(n, u, n0);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(all_zero_to(res[i][j], prec));

    // uniqueness: any perturbation of the first-order block breaks the equation
    auto bad = u;
    bad[0][0] = bad[0][0] + TruncSeries::monomial(1, Rat(1));
    auto res2 = descent_residual(n, bad, n0);
    CHECK(res2[0][0].coeff(1) != Rat(0));
}

TEST_CASE("descent rejects integer eigenvalue gaps") {
    Mat<TruncSeries> n{{TruncSeries(Rat(0)), TruncSeries::monomial(1, Rat(1))},
                       {TruncSeries::monomial(1, Rat(1)), TruncSeries(Rat(1))}};
    try {
        descend_gauge(n, 5);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::unprepared_eigenvalues);
    }
}

TEST_CASE("Kummer pullback stretches poles and scales log matrices") {
    DiffModule m = e_phi(mono1(-1, 1), 1, 1);
    DiffModule same = kummer_pullback(m, 1);
    CHECK(same.mats[0] == m.mats[0]);

    DiffModule twice = kummer_pullback(m, 2);
    CHECK(twice.mats[0][0][0] == mono1(-2, -2));
    CHECK(twice.mats[0] == e_phi(mono1(-2, 1), 1, 1).mats[0]);

    DiffModule mixed = e_phi(mono2(-1, 0, 1) + mono2(0, 1, 1), 2, 1);
    DiffModule pulled = kummer_pullback(mixed, 2);
    DiffModule direct = e_phi(mono2(-2, 0, 1) + mono2(0, 1, 1), 2, 1);
    CHECK(pulled.mats[0] == direct.mats[0]);
    CHECK(pulled.mats[1] == direct.mats[1]);
    CHECK(is_integrable(pulled));
}

TEST_CASE("admissible section satisfies its ceiling identity") {
    CHECK(admissible_section(Rat(0)) == Rat(0));
    CHECK(admissible_section(rat(5, 2)) == rat(1, 2));
    Rat lam = rat(7, 3);
    CHECK(admissible_section(lam) - lam == Rat(-2));
    Rat scaled = (admissible_section(lam * 3) - lam * 3) / 3;
    CHECK(Rat(rat_ceil(scaled)) == Rat(-2));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        long p = static_cast<long>(rng() % 201) - 100;
        long q = 1 + static_cast<long>(rng() % 20);
        long a = 1 + static_cast<long>(rng() % 50);
        Rat x = rat(p, q);
        Rat lhs = admissible_section(x) - x;
        Rat inner = (admissible_section(x * a) - x * a) / a;
        CHECK(lhs == Rat(rat_ceil(inner)));
    }
}

TEST_CASE("functors preserve integrability") {
    GoodModel g;
    g.nvars = 2;
    g.poles = 2;
    GoodTerm t1;
    t1.phi = mono2(-1, 0, 1);
    t1.rank = 2;
    t1.blocks = {qm({{0, 1}, {0, 0}}),
                 Mat<Rat>{{rat(1, 2), Rat(0)}, {Rat(0), rat(1, 2)}}};
    GoodTerm t2;
    t2.phi = mono2(0, -2, 1);
    t2.rank = 1;
    t2.blocks = {Mat<Rat>{{rat(1, 3)}}, Mat<Rat>{{Rat(0)}}};
    g.terms = {t1, t2};
    DiffModule m = realize(g);
    CHECK(is_integrable(m));
    CHECK(is_integrable(end_module(m)));
    CHECK(is_integrable(exterior_power(m, 2)));
    CHECK(is_integrable(kummer_pullback(m, 3)));
    CHECK(is_integrable(tensor(m, dual(m))));
}

TEST_CASE("minimalization does not move the slopes of the realization") {
    GoodModel g;
    g.nvars = 1;
    g.poles = 1;
    g.terms = {{mono1(-1, 1), 1, {Mat<Rat>{{Rat(0)}}}},
               {mono1(-1, 1) + mono1(1, 1), 1, {Mat<Rat>{{rat(1, 3)}}}}};
    auto before = module_slopes(realize(g));
    auto after = module_slopes(realize(minimalize(g)));
    CHECK(before == after);
}

TEST_CASE("scale multisets are gauge invariants") {
    DiffModule m = two_slope();
    Mat<LaurentPoly> u{{LaurentPoly::constant(1, Rat(1)), mono1(1, 2)},
                       {mono1(2, 1), LaurentPoly::constant(1, Rat(1)) + mono1(3, 2)}};
    DiffModule gauged = gauge_transform(m, u);
    CHECK(gauged.mats[0][0][1] != m.mats[0][0][1]);
    CHECK(module_slopes(gauged) == module_slopes(m));
    CHECK(scale_multiset(gauged, rat(1, 3)) == scale_multiset(m, rat(1, 3)));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        Mat<LaurentPoly> e = mat_identity(
            2, LaurentPoly::constant(1, Rat(1)), LaurentPoly(1));
        size_t r = rng() % 2, c = 1 - r;
        e[r][c] = mono1(static_cast<int>(rng() % 3), static_cast<long>(rng() % 5) - 2);
        DiffModule again = gauge_transform(gauged, e);
        CHECK(module_slopes(again) == module_slopes(m));
    }
}

TEST_CASE("shape mismatches are rejected") {
    DiffModule a = e_phi(mono1(-1, 1), 1, 1);
    DiffModule b = e_phi(mono2(-1, 0, 1), 2, 1);
    CHECK_THROWS_AS(tensor(a, b), error);
    CHECK_THROWS_AS(direct_sum(a, b), error);
    DiffModule multi = e_phi(mono2(-1, 0, 1), 2, 2);
    CHECK_THROWS_AS(cyclic_vector(multi), error);
}
