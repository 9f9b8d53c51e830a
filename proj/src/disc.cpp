#include "merom/disc.hpp"

#include <algorithm>

namespace merom {

namespace {

// Validates shape invariants and returns the samples sorted by radius.
std::vector<std::pair<Rat, std::vector<Rat>>> checked_samples(const RadiusProfile& p) {
    if (p.d < 1) fail(errc::invariant_violation, "profile rank must be positive");
    if (p.samples.empty()) fail(errc::invariant_violation, "profile has no samples");
    auto samples = p.samples;
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t k = 0; k < samples.size(); ++k) {
        const auto& [s, f] = samples[k];
        if (k > 0 && samples[k - 1].first == s)
            fail(errc::invariant_violation, "duplicate grid radius");
        if (f.size() != size_t(p.d))
            fail(errc::invariant_violation, "profile row width differs from the rank");
        for (size_t i = 0; i < f.size(); ++i) {
            if (i > 0 && f[i] > f[i - 1])
                fail(errc::invariant_violation, "profile rows must be sorted descending");
            if (f[i] < s)
                fail(errc::invariant_violation, "radius below the diagonal");
        }
    }
    return samples;
}

} // namespace

RadiusProfile profile(const DiffModule& m, const std::vector<Rat>& grid) {
    if (grid.empty()) fail(errc::zero_input, "empty radius grid");
    for (const Rat& s : grid)
        if (sgn(s) <= 0) fail(errc::precondition_violated, "grid radii must be positive");
    std::vector<Rat> gs = grid;
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());

    std::vector<Rat> slopes = module_slopes(m);
    RadiusProfile p;
    p.d = m.rank;
    for (const Rat& s : gs) {
        std::vector<Rat> f;
        f.reserve(slopes.size());
        for (auto it = slopes.rbegin(); it != slopes.rend(); ++it)
            f.push_back(std::max(s, *it));
        p.samples.push_back({s, std::move(f)});
    }
    return p;
}

QuantizationReport slope_quantization_check(const RadiusProfile& p) {
    auto samples = checked_samples(p);
    QuantizationReport rep;
    auto flag = [&](bool& b, int i, const Rat& s) {
        b = false;
        if (rep.witness_i == 0) {
            rep.witness_i = i;
            rep.witness_s = s;
        }
    };
    Rat dfact(1);
    for (int k = 2; k <= p.d; ++k) dfact *= k;
    for (int i = 1; i <= p.d; ++i) {
        bool have_prev = false;
        Rat prev;
        for (size_t k = 1; k < samples.size(); ++k) {
            Rat lo(0), hi(0);
            for (int j = 0; j < i; ++j) {
                lo += samples[k - 1].second[j];
                hi += samples[k].second[j];
            }
            Rat slope = (hi - lo) / (samples[k].first - samples[k - 1].first);
            if (rep.quantized && !is_integer(slope * dfact))
                flag(rep.quantized, i, samples[k].first);
            if (rep.convex && have_prev && slope < prev)
                flag(rep.convex, i, samples[k].first);
            bool above = samples[k - 1].second[i - 1] > samples[k - 1].first &&
                         samples[k].second[i - 1] > samples[k].first;
            if (rep.level_above && above && hi > lo)
                flag(rep.level_above, i, samples[k].first);
            prev = slope;
            have_prev = true;
        }
    }
    return rep;
}

TerminalReport terminal_test(const RadiusProfile& p) {
    auto samples = checked_samples(p);
    size_t n = samples.size();
    if (n < 3)
        fail(errc::insufficient_samples, "terminality needs at least three samples");

    auto shape_from = [&](size_t k0) {
        for (int i = 0; i < p.d; ++i) {
            const Rat& c = samples[k0].second[i];
            for (size_t k = k0; k < n; ++k)
                if (samples[k].second[i] != std::max(samples[k].first, c)) return false;
        }
        return true;
    };

    TerminalReport rep;
    if (shape_from(0)) {
        rep.terminal = true;
        rep.becomes_at = Rat(0);
    } else {
        for (size_t k0 = 1; k0 + 2 <= n; ++k0)
            if (shape_from(k0)) {
                rep.becomes_at = samples[k0].first;
                break;
            }
    }

    size_t mid = n / 2;
    rep.strong = true;
    for (int i = 0; i < p.d && rep.strong; ++i) {
        auto at = [&](size_t k) { return samples[k].second[i]; };
        bool constant = at(0) == at(mid) && at(mid) == at(n - 1);
        bool diagonal = at(0) == samples[0].first && at(mid) == samples[mid].first &&
                        at(n - 1) == samples[n - 1].first;
        rep.strong = constant || diagonal;
    }
    rep.strong_lo = samples.front().first;
    rep.strong_hi = samples.back().first;
    return rep;
}

std::vector<std::vector<TruncSeries>> horizontal_sections(const DiffModule& m,
                                                          int prec) {
    m.validate();
    if (m.nvars != 1)
        fail(errc::dimension_unsupported, "horizontal sections need one variable");
    if (module_twist(m) != Twist::tddt)
        fail(errc::precondition_violated, "the t d/dt twist is required");
    if (prec < 1) fail(errc::precondition_violated, "positive precision required");

    const Mat<LaurentPoly>& n = m.mats[0];
    const int d = m.rank;
    int lo = 0, hi = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            for (const auto& term : n[r][c].terms()) {
                lo = std::min(lo, term.first[0]);
                hi = std::max(hi, term.first[0]);
            }

    if (lo < 0) {
        Mat<Rat> lead(d, std::vector<Rat>(d));
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) lead[r][c] = n[r][c].coeff({lo});
        if (q_rank(lead) == d) return {};
        fail(errc::not_implemented, "pole with a degenerate leading matrix");
    }

    std::vector<Mat<Rat>> nj(hi + 1, Mat<Rat>(d, std::vector<Rat>(d, Rat(0))));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            for (const auto& term : n[r][c].terms()) nj[term.first[0]][r][c] = term.second;

    std::vector<std::vector<std::vector<Rat>>> sols;
    for (long start = 0; start < prec; ++start) {
        Mat<Rat> shifted = nj[0];
        for (int i = 0; i < d; ++i) shifted[i][i] += Rat(start);
        for (const auto& w : q_kernel(shifted)) {
            std::vector<std::vector<Rat>> v(start, std::vector<Rat>(d, Rat(0)));
            v.push_back(w);
            for (long k = start + 1; k < prec; ++k) {
                std::vector<Rat> rhs(d, Rat(0));
                for (long j = 1; j <= std::min<long>(k - start, hi); ++j) {
                    for (int r = 0; r < d; ++r)
                        for (int c = 0; c < d; ++c) rhs[r] -= nj[j][r][c] * v[k - j][c];
                }
                Mat<Rat> sys = nj[0];
                for (int i = 0; i < d; ++i) sys[i][i] += Rat(k);
                auto x = q_solve_unique(sys, rhs);
                if (!x)
                    fail(errc::resonant_eigenvalues,
                         "degreewise solve blocked at order " + std::to_string(k));
                v.push_back(*x);
            }
            sols.push_back(std::move(v));
        }
    }

    std::vector<std::vector<TruncSeries>> out;
    for (const auto& v : sols) {
        std::vector<TruncSeries> row(d);
        for (int r = 0; r < d; ++r) {
            TruncSeries s = TruncSeries::zero_known_to(prec);
            for (long k = 0; k < prec; ++k)
                if (v[k][r] != 0) s = s + TruncSeries::monomial(int(k), v[k][r]);
            row[r] = s;
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace merom
