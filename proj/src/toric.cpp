#include "merom/toric.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace merom {

namespace {

using Ray = std::vector<long>;

Ray primitive(Ray v) {
    long g = 0;
    for (long x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1)
        for (long& x : v) x /= g;
    return v;
}

long dotv(const std::vector<long>& a, const Ray& r) {
    long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * r[i];
    return s;
}

long det2l(const Ray& u, const Ray& v) { return u[0] * v[1] - u[1] * v[0]; }

long detl(const Mat<long>& a) {
    int n = static_cast<int>(a.size());
    if (n == 1) return a[0][0];
    long d = 0;
    for (int i = 0; i < n; ++i) {
        Mat<long> sub;
        for (int r = 1; r < n; ++r) {
            std::vector<long> row;
            for (int c = 0; c < n; ++c)
                if (c != i) row.push_back(a[r][c]);
            sub.push_back(row);
        }
        long term = a[0][i] * detl(sub);
        d += (i % 2 == 0) ? term : -term;
    }
    return d;
}

Mat<Rat> mat_rat(const Mat<long>& a) {
    Mat<Rat> m;
    for (const auto& row : a) {
        std::vector<Rat> r;
        for (long v : row) r.push_back(Rat(v));
        m.push_back(r);
    }
    return m;
}

// Primitive ray where the kernel plane of a meets the cone spanned by the two
// rays, given dot(a, pos) > 0 > dot(a, neg).
Ray crossing(const std::vector<long>& a, const Ray& pos, const Ray& neg) {
    long wp = dotv(a, pos);
    long wn = dotv(a, neg);
    Ray z(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) z[i] = wp * neg[i] - wn * pos[i];
    return primitive(z);
}

void slice_cone(const Cone& cone, const std::vector<long>& a,
                std::vector<Cone>& out) {
    std::vector<int> sg;
    bool has_pos = false;
    bool has_neg = false;
    for (const Ray& r : cone.rays) {
        long d = dotv(a, r);
        sg.push_back(d > 0 ? 1 : d < 0 ? -1 : 0);
        has_pos = has_pos || d > 0;
        has_neg = has_neg || d < 0;
    }
    if (!has_pos || !has_neg) {
        out.push_back(cone);
        return;
    }
    if (cone.rays.size() == 2) {
        const Ray& u = sg[0] > 0 ? cone.rays[0] : cone.rays[1];
        const Ray& v = sg[0] > 0 ? cone.rays[1] : cone.rays[0];
        Ray z = crossing(a, u, v);
        out.push_back(Cone{{u, z}});
        out.push_back(Cone{{z, v}});
        return;
    }
    std::vector<Ray> pos, neg, zer;
    for (size_t i = 0; i < cone.rays.size(); ++i) {
        if (sg[i] > 0)
            pos.push_back(cone.rays[i]);
        else if (sg[i] < 0)
            neg.push_back(cone.rays[i]);
        else
            zer.push_back(cone.rays[i]);
    }
    if (zer.size() == 1) {
        Ray z = crossing(a, pos[0], neg[0]);
        out.push_back(Cone{{zer[0], pos[0], z}});
        out.push_back(Cone{{zer[0], z, neg[0]}});
        return;
    }
    // one ray on one side of the plane, two on the other; the cut is a
    // triangle plus a quadrilateral split along a diagonal
    bool two_pos = pos.size() == 2;
    const Ray& lone = two_pos ? neg[0] : pos[0];
    const std::vector<Ray>& pair = two_pos ? pos : neg;
    Ray q1 = two_pos ? crossing(a, pair[0], lone) : crossing(a, lone, pair[0]);
    Ray q2 = two_pos ? crossing(a, pair[1], lone) : crossing(a, lone, pair[1]);
    out.push_back(Cone{{lone, q1, q2}});
    out.push_back(Cone{{pair[0], pair[1], q2}});
    out.push_back(Cone{{pair[0], q2, q1}});
}

bool slope_less(const Ray& u, const Ray& v) {
    return u[1] * v[0] < v[1] * u[0];
}

Cone canonical(Cone c) {
    if (c.rays[0].size() == 2) {
        if (slope_less(c.rays[1], c.rays[0])) std::swap(c.rays[0], c.rays[1]);
    } else {
        std::sort(c.rays.begin(), c.rays.end());
    }
    return c;
}

// z0 with det(u, z0) = 1, for primitive u, by the extended Euclidean
// algorithm on the coordinates.
Ray unimodular_partner(const Ray& u) {
    long r0 = u[0], r1 = u[1];
    long x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        long q = r0 / r1;
        long r = r0 - q * r1;
        long x = x0 - q * x1;
        long y = y0 - q * y1;
        r0 = r1;
        r1 = r;
        x0 = x1;
        x1 = x;
        y0 = y1;
        y1 = y;
    }
    if (r0 < 0) {
        x0 = -x0;
        y0 = -y0;
    }
    return {-y0, x0};
}

}  // namespace

Chart perron(const std::vector<ValueElt>& c, int r) {
    int s = static_cast<int>(c.size());
    if (s == 0) fail(errc::zero_input, "no scales to reduce");
    if (s > 4) fail(errc::not_implemented, "at most four scales are supported");
    if (r < 1 || r > s)
        fail(errc::precondition_violated, "basis size out of range");
    for (const ValueElt& v : c)
        if (sign(v) <= 0)
            fail(errc::precondition_violated, "scales must be positive");
    auto rank_upto = [&](int k) {
        Mat<Rat> m;
        for (int i = 0; i < k; ++i) m.push_back({c[i].p, c[i].q});
        return q_rank(m);
    };
    if (rank_upto(r) != r || rank_upto(s) != r)
        fail(errc::span_mismatch, "the leading scales are not a basis");

    std::vector<ValueElt> d = c;
    Mat<long> a(s, std::vector<long>(s, 0));
    Mat<long> b(s, std::vector<long>(s, 0));
    for (int i = 0; i < s; ++i) a[i][i] = b[i][i] = 1;
    int zeros = 0;
    for (int pass = 0; zeros < s - r; ++pass) {
        if (pass > 200)
            fail(errc::no_convergence, "scale reduction did not terminate");
        int mi = -1;
        for (int i = 0; i < s; ++i)
            if (sign(d[i]) > 0 && (mi < 0 || d[i] < d[mi])) mi = i;
        for (int j = 0; j < s && zeros < s - r; ++j) {
            if (j == mi || sign(d[j]) <= 0) continue;
            long q = floor(div(d[j], d[mi]));
            d[j] = d[j] + d[mi] * Rat(-q);
            for (int k = 0; k < s; ++k) {
                a[j][k] -= q * a[mi][k];
                b[k][mi] += q * b[k][j];
            }
            if (sign(d[j]) == 0) ++zeros;
        }
    }

    std::vector<int> order;
    for (int i = 0; i < s; ++i)
        if (sign(d[i]) > 0) order.push_back(i);
    for (int i = 0; i < s; ++i)
        if (sign(d[i]) == 0) order.push_back(i);
    Mat<long> pa(s), pb(s, std::vector<long>(s, 0));
    for (int i = 0; i < s; ++i) pa[i] = a[order[i]];
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) pb[i][j] = b[i][order[j]];

    for (int i = 0; i < s; ++i) {
        ValueElt t;
        for (int j = 0; j < s; ++j) t += c[j] * Rat(pa[i][j]);
        int sg = sign(t);
        if (i < r ? sg <= 0 : sg != 0)
            fail(errc::span_mismatch, "reduction postcondition failed");
    }
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            long acc = 0;
            for (int k = 0; k < s; ++k) acc += pa[i][k] * pb[k][j];
            if (acc != (i == j ? 1 : 0))
                fail(errc::internal_error, "inverse bookkeeping failed");
        }
    return Chart{pa, true};
}

std::vector<Cone> linearity_fan(const PLFunction& f) {
    if (f.nvars < 1)
        fail(errc::precondition_violated, "at least one variable is needed");
    if (f.nvars > 3)
        fail(errc::dimension_unsupported, "fans stop at three variables");
    std::set<std::vector<long>> planes;
    for (const PLTerm& t : f.terms) {
        if (static_cast<int>(t.a.size()) != f.nvars)
            fail(errc::shape_mismatch, "hinge arity does not match");
        if (t.weight == 0) continue;
        bool any_pos = false;
        bool any_neg = false;
        for (long x : t.a) {
            any_pos = any_pos || x > 0;
            any_neg = any_neg || x < 0;
        }
        if (!any_pos || !any_neg) continue;
        Ray n = primitive(t.a);
        for (long x : n) {
            if (x == 0) continue;
            if (x < 0)
                for (long& y : n) y = -y;
            break;
        }
        planes.insert(n);
    }
    Cone orthant;
    for (int i = 0; i < f.nvars; ++i) {
        Ray e(f.nvars, 0);
        e[i] = 1;
        orthant.rays.push_back(e);
    }
    std::vector<Cone> fan = {orthant};
    for (const auto& a : planes) {
        std::vector<Cone> next;
        for (const Cone& cone : fan) slice_cone(cone, a, next);
        fan = std::move(next);
    }
    for (Cone& c : fan) c = canonical(c);
    std::sort(fan.begin(), fan.end(),
              [](const Cone& x, const Cone& y) { return x.rays < y.rays; });
    return fan;
}

std::vector<Cone> refine_smooth(const std::vector<Cone>& cones) {
    std::vector<Cone> out;
    for (const Cone& cone : cones) {
        if (cone.rays.empty()) fail(errc::zero_input, "cone without rays");
        int n = static_cast<int>(cone.rays[0].size());
        if (n == 1 || static_cast<int>(cone.rays.size()) != n) {
            out.push_back(cone);
            continue;
        }
        if (n > 2) {
            long d = detl(cone.rays);
            if (d == 1 || d == -1) {
                out.push_back(cone);
                continue;
            }
            fail(errc::dimension_unsupported,
                 "smoothing is only implemented for plane cones");
        }
        long d = det2l(cone.rays[0], cone.rays[1]);
        if (d == 0) fail(errc::invariant_violation, "degenerate plane cone");
        if (d == 1 || d == -1) {
            out.push_back(cone);
            continue;
        }
        Ray u = d > 0 ? cone.rays[0] : cone.rays[1];
        Ray v = d > 0 ? cone.rays[1] : cone.rays[0];
        while (det2l(u, v) > 1) {
            Ray z0 = unimodular_partner(u);
            long t = rat_ceil(rat(-det2l(z0, v), det2l(u, v)));
            Ray z = {z0[0] + t * u[0], z0[1] + t * u[1]};
            out.push_back(Cone{{u, z}});
            u = z;
        }
        out.push_back(Cone{{u, v}});
    }
    return out;
}

std::vector<LinearizedChart> linearize(const PLFunction& f_module,
                                       const PLFunction& f_end) {
    if (f_module.nvars != f_end.nvars)
        fail(errc::shape_mismatch, "the two invariants have different arity");
    int n = f_module.nvars;
    PLFunction both;
    both.nvars = n;
    both.terms = f_module.terms;
    both.terms.insert(both.terms.end(), f_end.terms.begin(), f_end.terms.end());
    std::vector<LinearizedChart> out;
    for (const Cone& cone : refine_smooth(linearity_fan(both))) {
        if (static_cast<int>(cone.rays.size()) != n)
            fail(errc::internal_error, "fan cone is not full dimensional");
        LinearizedChart lc;
        lc.chart.a = Mat<long>(n, std::vector<long>(n, 0));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) lc.chart.a[i][j] = cone.rays[j][i];
        auto inv = q_inverse(mat_rat(lc.chart.a));
        if (!inv) fail(errc::internal_error, "fan cone rays are dependent");
        lc.chart.inv_nonneg = true;
        for (const auto& row : *inv)
            for (const Rat& v : row)
                if (sgn(v) < 0) lc.chart.inv_nonneg = false;
        std::vector<Rat> total(n, Rat(0));
        for (int j = 0; j < n; ++j) {
            std::vector<Rat> col;
            for (int i = 0; i < n; ++i) {
                col.push_back(Rat(cone.rays[j][i]));
                total[i] += col.back();
            }
            lc.module_functional.push_back(f_module.eval(col));
            lc.end_functional.push_back(f_end.eval(col));
        }
        Rat msum(0), esum(0);
        for (int j = 0; j < n; ++j) {
            msum += lc.module_functional[j];
            esum += lc.end_functional[j];
        }
        if (f_module.eval(total) != msum || f_end.eval(total) != esum)
            fail(errc::internal_error, "invariant is nonlinear on a fan cone");
        out.push_back(std::move(lc));
    }
    return out;
}

GoodModel pullback_good(const GoodModel& g, const Chart& chart) {
    g.validate();
    int n = g.nvars;
    if (static_cast<int>(chart.a.size()) != n)
        fail(errc::shape_mismatch, "chart size does not match the model");
    for (const auto& row : chart.a)
        if (static_cast<int>(row.size()) != n)
            fail(errc::shape_mismatch, "chart matrix is not square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (chart.a[i][j] < 0)
                fail(errc::pole_escape, "negative substitution exponent");
            if (i < g.poles && j >= g.poles && chart.a[i][j] != 0)
                fail(errc::pole_escape,
                     "pole variable maps across the ordinary divisor");
        }
    long d = detl(chart.a);
    if (d != 1 && d != -1)
        fail(errc::precondition_violated, "chart must be unimodular");

    GoodModel out;
    out.nvars = n;
    out.poles = g.poles;
    for (const GoodTerm& t : g.terms) {
        GoodTerm s;
        s.phi = t.phi.subst_monomial(chart.a, n);
        s.rank = t.rank;
        for (int j = 0; j < g.poles; ++j) {
            Mat<Rat> blk(t.rank, std::vector<Rat>(t.rank, Rat(0)));
            for (int i = 0; i < g.poles; ++i)
                if (chart.a[i][j] != 0)
                    blk = mat_add(blk, mat_scale(t.blocks[i], Rat(chart.a[i][j])));
            s.blocks.push_back(blk);
        }
        out.terms.push_back(s);
    }
    out.validate();
    return out;
}

}  // namespace merom
