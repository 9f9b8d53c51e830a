#include "doctest.h"

#include <random>

#include "merom/hensel.hpp"

using namespace merom;

namespace {

TruncSeries mono(int e, long num, long den = 1) {
    return TruncSeries::monomial(e, rat(num, den));
}

TwistedPoly tp(std::vector<TruncSeries> c) {
    return TwistedPoly(Twist::tddt, std::move(c));
}

// T - 1 and T - t, the standard pair whose linearization is singular at
// t-degree one (kernel direction t*exp(-t)).
TwistedPoly pair_a() { return tp({TruncSeries(Rat(-1)), TruncSeries(Rat(1))}); }
TwistedPoly pair_b() { return tp({mono(1, -1), TruncSeries(Rat(1))}); }

// Monic factor of pure slope a and degree d: constant term sits exactly on
// the hull line, middle coefficients on or above it.
TwistedPoly rand_pure(long a, int d, std::mt19937_64& rng) {
    std::vector<TruncSeries> c(d + 1);
    c[d] = TruncSeries(Rat(1));
    c[0] = mono(static_cast<int>(-a * d), 1 + static_cast<long>(rng() % 4));
    for (int i = 1; i < d; ++i) {
        if (rng() % 3 == 0) continue;
        int lift = static_cast<int>(rng() % 3);
        c[i] = mono(static_cast<int>(-a * (d - i)) + lift, 1 + static_cast<long>(rng() % 4));
    }
    return tp(std::move(c));
}

TwistedPoly rand_exact(int d, std::mt19937_64& rng) {
    std::vector<TruncSeries> c(d + 1);
    for (int i = 0; i <= d; ++i)
        for (int k = 0; k < 2; ++k) {
            long num = static_cast<long>(rng() % 9) - 4;
            if (num != 0) c[i] = c[i] + mono(static_cast<int>(rng() % 5) - 2, num);
        }
    if (c[d].known_zero()) c[d] = mono(0, 1);
    return tp(std::move(c));
}

} // namespace

TEST_CASE("exact factorizations need no correction") {
    TwistedPoly a = pair_a(), b = pair_b();
    HenselCorrection res = hensel_factor(a, b, tw_mul(a, b), HenselParams{Rat(0), 20});
    CHECK(res.x.is_zero());
    CHECK(res.y.is_zero());
    CHECK(res.iterations == 0);
}

TEST_CASE("correction satisfies the valuation bound certificate") {
    TwistedPoly a = pair_a(), b = pair_b();
    TwistedPoly c = tw_mul(a, b) + tp({mono(3, 1)});

    for (long lam : {0L, 1L}) {
        HenselCorrection res = hensel_factor(a, b, c, HenselParams{Rat(lam), 20});
        CHECK(res.iterations >= 1);
        REQUIRE(!res.residual_vals.empty());
        CHECK(res.residual_vals.front() == Rat(3));
        CHECK(tw_mul(a + res.x, b + res.y).agrees_with(c));
        // v(x) >= v(c-ab) - v(b) - lambda and symmetrically for y
        auto vx = poly_val(res.x), vy = poly_val(res.y);
        if (vx) CHECK(*vx >= Rat(3 - lam));
        if (vy) CHECK(*vy >= Rat(3 - lam));
        CHECK((vx || vy));
    }

    try {
        hensel_factor(a, b, tw_mul(a, b) + tp({TruncSeries(Rat(1))}), HenselParams{Rat(0), 20});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::precondition_violated);
    }
}

TEST_CASE("random corrections meet their certificates and converge geometrically") {
    std::mt19937_64 rng(777001);
    for (int it = 0; it < 100; ++it) {
        int da = 1 + static_cast<int>(rng() % 2);
        int db = 1 + static_cast<int>(rng() % 2);
        std::vector<TruncSeries> ac(da + 1);
        ac[da] = TruncSeries(Rat(1));
        ac[0] = TruncSeries(Rat(1)) + mono(1 + static_cast<int>(rng() % 4),
                                           static_cast<long>(rng() % 7) - 3);
        for (int i = 1; i < da; ++i)
            if (rng() % 2)
                ac[i] = mono(0, static_cast<long>(rng() % 3)) +
                        mono(1 + static_cast<int>(rng() % 3), static_cast<long>(rng() % 7) - 3);
        TwistedPoly a = tp(std::move(ac));
        std::vector<TruncSeries> bc(db + 1);
        bc[db] = TruncSeries(Rat(1));
        TwistedPoly b = tp(std::move(bc));

        int h = 1 + static_cast<int>(rng() % 6);
        int k = static_cast<int>(rng() % (da + db + 1));
        std::vector<TruncSeries> pc(k + 1);
        pc[k] = mono(h, 1 + static_cast<long>(rng() % 5));
        TwistedPoly c = tw_mul(a, b) + tp(std::move(pc));

        HenselCorrection res = hensel_factor(a, b, c, HenselParams{Rat(0), 20});
        CHECK(tw_mul(a + res.x, b + res.y).agrees_with(c));
        REQUIRE(!res.residual_vals.empty());
        CHECK(res.residual_vals.front() == Rat(h));
        auto vx = poly_val(res.x), vy = poly_val(res.y);
        if (vx) CHECK(*vx >= Rat(h));
        if (vy) CHECK(*vy >= Rat(h));
        CHECK((vx || vy));
        // each pass gains at least the initial gap v(c-ab) - v(c)
        for (size_t j = 1; j < res.residual_vals.size(); ++j)
            CHECK(res.residual_vals[j] - res.residual_vals[j - 1] >= res.residual_vals.front());
    }
}

TEST_CASE("free directions at singular degrees resolve to zero") {
    TwistedPoly a = pair_a(), b = pair_b();
    TwistedPoly c = tw_mul(a, b) + tp({TruncSeries(), mono(1, 1)});
    HenselCorrection res = hensel_factor(a, b, c, HenselParams{Rat(0), 20});
    CHECK(tw_mul(a + res.x, b + res.y).agrees_with(c));
}

TEST_CASE("obstructed perturbations report resonance") {
    TwistedPoly a = pair_a(), b = pair_b();
    TwistedPoly c = tw_mul(a, b) + tp({mono(1, 1)});
    try {
        hensel_factor(a, b, c, HenselParams{Rat(0), 20});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::no_convergence);
    }
}

TEST_CASE("factorization input guards") {
    TwistedPoly a = pair_a();
    TwistedPoly bneg = tp({mono(-1, -1), TruncSeries(Rat(1))});
    TwistedPoly c = tw_mul(a, bneg) + tp({mono(3, 1)});
    try {
        hensel_factor(a, bneg, c, HenselParams{Rat(0), 20});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::not_implemented);
    }

    TwistedPoly ad(Twist::ddt, {TruncSeries(Rat(-1)), TruncSeries(Rat(1))});
    TwistedPoly bd(Twist::ddt, {mono(1, -1), TruncSeries(Rat(1))});
    TwistedPoly cd = tw_mul(ad, bd) + TwistedPoly(Twist::ddt, {mono(3, 1)});
    try {
        hensel_factor(ad, bd, cd, HenselParams{Rat(0), 20});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::not_implemented);
    }
    try {
        slope_factor(cd);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::not_implemented);
    }

    try {
        hensel_factor(a, a, tw_mul(a, a) + tp({mono(3, 1)}), HenselParams{Rat(-1), 20});
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::precondition_violated);
    }
}

TEST_CASE("twisted right division recovers quotient and remainder") {
    std::mt19937_64 rng(424243);
    for (int it = 0; it < 20; ++it) {
        TwistedPoly q = rand_exact(static_cast<int>(rng() % 3), rng);
        int dd = 1 + static_cast<int>(rng() % 2);
        std::vector<TruncSeries> dc(dd + 1);
        dc[dd] = TruncSeries(rat(1 + static_cast<long>(rng() % 3), 1));
        for (int i = 0; i < dd; ++i)
            dc[i] = mono(static_cast<int>(rng() % 5) - 2, static_cast<long>(rng() % 9) - 4);
        TwistedPoly d = tp(std::move(dc));
        std::vector<TruncSeries> rc(dd);
        for (int i = 0; i < dd; ++i)
            if (rng() % 2) rc[i] = mono(static_cast<int>(rng() % 5) - 2, 1 + static_cast<long>(rng() % 4));
        TwistedPoly r = tp(std::move(rc));

        auto [q2, r2] = tw_divmod_right(tw_mul(q, d) + r, d);
        CHECK(q2.agrees_with(q));
        CHECK(r2.agrees_with(r));
    }

    TwistedPoly bad = tp({TruncSeries(Rat(1)), mono(1, 1)});
    try {
        tw_divmod_right(tp({TruncSeries(Rat(1)), TruncSeries(Rat(1))}), bad);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::shape_mismatch);
    }
    try {
        tw_divmod_right(pair_a(), TwistedPoly());
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::division_by_zero);
    }
}

TEST_CASE("single-slope operators do not split") {
    TwistedPoly p = tp({mono(-3, 1), mono(-1, 1), TruncSeries(Rat(1))});
    auto fs = slope_factor(p);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].agrees_with(p));
}

TEST_CASE("two-slope operators split into canonical descending factors") {
    TwistedPoly f1 = tp({mono(-1, 2), TruncSeries(Rat(1))}); // T + 2/t
    TwistedPoly f2 = tp({TruncSeries(Rat(-1)), TruncSeries(Rat(1))}); // T - 1
    TwistedPoly p = tw_mul(f1, f2);

    auto fs = slope_factor(p);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].deg() == 1);
    CHECK(fs[1].deg() == 1);
    CHECK(full_slopes(fs[0]) == std::vector<Rat>{Rat(1)});
    CHECK(full_slopes(fs[1]) == std::vector<Rat>{Rat(0)});
    CHECK(fs[0].agrees_with(f1));
    CHECK(fs[1].agrees_with(f2));
    CHECK(fs[1].c[1] == TruncSeries(Rat(1)));
    CHECK(tw_mul(fs[0], fs[1]).agrees_with(p));

    // ascending input order still factors with the top slope on the left
    TwistedPoly p2 = tw_mul(f2, f1);
    auto gs = slope_factor(p2);
    REQUIRE(gs.size() == 2);
    CHECK(full_slopes(gs[0]) == std::vector<Rat>{Rat(1)});
    CHECK(full_slopes(gs[1]) == std::vector<Rat>{Rat(0)});
    CHECK(gs[1].c[1] == TruncSeries(Rat(1)));
    CHECK(tw_mul(gs[0], gs[1]).agrees_with(p2));
}

TEST_CASE("zero top slope splits off the regular part") {
    TwistedPoly p = tp({mono(3, 1), mono(0, -1) + mono(1, -1), TruncSeries(Rat(1))});
    auto fs = slope_factor(p);
    REQUIRE(fs.size() == 2);
    CHECK(full_slopes(fs[0]) == std::vector<Rat>{Rat(0)});
    CHECK(full_slopes(fs[1]) == std::vector<Rat>{Rat(-3)});
    REQUIRE(fs[1].deg() == 1);
    CHECK(fs[1].c[1] == TruncSeries(Rat(1)));
    REQUIRE(fs[1].c[0].val().has_value());
    CHECK(*fs[1].c[0].val() == 3);
    CHECK(tw_mul(fs[0], fs[1]).agrees_with(p));
}

TEST_CASE("pure-slope products factor back into their components") {
    std::mt19937_64 rng(31337);
    for (int it = 0; it < 30; ++it) {
        int nf = 2 + static_cast<int>(rng() % 2);
        std::vector<long> slopes{3, 2, 1, 0};
        for (int k = 3; k > 0; --k) std::swap(slopes[k], slopes[rng() % (k + 1)]);
        slopes.resize(nf);
        std::sort(slopes.rbegin(), slopes.rend());

        std::vector<TwistedPoly> fs;
        for (int k = 0; k < nf; ++k)
            fs.push_back(rand_pure(slopes[k], 1 + static_cast<int>(rng() % 2), rng));
        TwistedPoly p = fs[0];
        for (int k = 1; k < nf; ++k) p = tw_mul(p, fs[k]);

        auto out = slope_factor(p);
        REQUIRE(out.size() == fs.size());
        TwistedPoly prod = out[0];
        for (size_t k = 1; k < out.size(); ++k) prod = tw_mul(prod, out[k]);
        CHECK(prod.agrees_with(p));
        for (size_t k = 0; k < out.size(); ++k) {
            CHECK(out[k].deg() == fs[k].deg());
            CHECK(out[k].agrees_with(fs[k]));
        }
    }
}

TEST_CASE("refactoring a reassembled product is stable") {
    TwistedPoly f1 = tp({mono(-2, 3), TruncSeries(Rat(1))});
    TwistedPoly f2 = tp({mono(-1, -1), TruncSeries(Rat(1))});
    TwistedPoly f3 = tp({TruncSeries(Rat(5)), TruncSeries(Rat(1))});
    TwistedPoly q = tw_mul(tw_mul(f1, f2), f3);

    auto fs = slope_factor(q);
    REQUIRE(fs.size() == 3);
    TwistedPoly q2 = tw_mul(tw_mul(fs[0], fs[1]), fs[2]);
    auto gs = slope_factor(q2);
    REQUIRE(gs.size() == 3);
    for (size_t k = 0; k < 3; ++k) CHECK(gs[k].agrees_with(fs[k]));
}

TEST_CASE("annulus split separates the two boundary parts") {
    ValueElt s2(Rat(0), Rat(1));
    LaurentPoly one = LaurentPoly::constant(1, Rat(1));

    AnnulusSplit sp = annulus_factor(one, s2);
    CHECK(sp.i == 0);
    CHECK(sp.g1 == one);
    CHECK(sp.g2 == one);

    sp = annulus_factor(LaurentPoly::monomial(1, {2}, Rat(1)), s2);
    CHECK(sp.i == 2);
    CHECK(sp.g1 == one);
    CHECK(sp.g2 == one);

    LaurentPoly f = one;
    f.set({1}, Rat(1));
    sp = annulus_factor(f, s2);
    CHECK(sp.i == 0);
    CHECK(sp.g1 == f);
    CHECK(sp.g2 == one);

    LaurentPoly g = LaurentPoly::monomial(1, {-1}, Rat(3));
    g.set({1}, Rat(1));
    sp = annulus_factor(g, s2);
    CHECK(sp.i == -1);
    CHECK(sp.g2 == LaurentPoly::constant(1, Rat(3)));
    LaurentPoly expect1 = one;
    expect1.set({2}, rat(1, 3));
    CHECK(sp.g1 == expect1);

    sp = annulus_factor(g, ValueElt(Rat(0), Rat(-1)));
    CHECK(sp.i == 1);
    CHECK(sp.g1 == one);
    LaurentPoly expect2 = one;
    expect2.set({-2}, Rat(3));
    CHECK(sp.g2 == expect2);
}

TEST_CASE("annulus split preserves the weighted valuation") {
    std::mt19937_64 rng(90210);
    std::vector<ValueElt> radii{ValueElt(Rat(0), Rat(1)), ValueElt(Rat(0), Rat(-1)),
                                ValueElt(Rat(1), Rat(1)), ValueElt(rat(-3, 2), rat(1, 2))};
    for (int it = 0; it < 30; ++it) {
        LaurentPoly g = LaurentPoly::constant(1, Rat(0));
        int nterms = 2 + static_cast<int>(rng() % 3);
        for (int k = 0; k < nterms; ++k)
            g.set({static_cast<int>(rng() % 11) - 5}, rat(1 + static_cast<long>(rng() % 6), 1));
        for (auto& s : radii) {
            AnnulusSplit sp = annulus_factor(g, s);
            CHECK(sp.g1.gauss_val({s}) == ValueElt(Rat(0)));
            CHECK(sp.g2.gauss_val({s}) == ValueElt(Rat(0)));
            CHECK(g.gauss_val({s}) == s * Rat(sp.i));
        }
    }
}

TEST_CASE("annulus split input guards") {
    ValueElt s2(Rat(0), Rat(1));
    try {
        annulus_factor(LaurentPoly::constant(1, Rat(1)), ValueElt(rat(3, 2)));
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::rational_radius);
    }
    try {
        annulus_factor(LaurentPoly::constant(1, Rat(0)), s2);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::zero_input);
    }
    try {
        annulus_factor(LaurentPoly::constant(2, Rat(1)), s2);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::shape_mismatch);
    }
}

TEST_CASE("valuation summaries over coefficient windows") {
    TwistedPoly b = pair_b();
    REQUIRE(poly_val(b).has_value());
    CHECK(*poly_val(b) == Rat(0));
    TwistedPoly w = tp({TruncSeries::zero_known_to(5)});
    CHECK(!poly_val(w).has_value());
    REQUIRE(poly_val_lower(w).has_value());
    CHECK(*poly_val_lower(w) == Rat(5));
}
