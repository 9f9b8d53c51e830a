#include "merom/ratfunc.hpp"

#include <algorithm>

namespace merom {

namespace {

// Row-echelon elimination in place; returns (rank, pivot columns, sign).
// Optionally carries an augmented column b.
struct Echelon {
    long rank = 0;
    std::vector<long> pivot_col;
};

Echelon echelon(Mat<Rat>& A, std::vector<Rat>* b) {
    mat_check(A);
    long m = mat_rows(A), n = mat_cols(A);
    Echelon e;
    long row = 0;
    for (long col = 0; col < n && row < m; ++col) {
        long piv = -1;
        for (long r = row; r < m; ++r)
            if (sgn(A[r][col]) != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(A[piv], A[row]);
        if (b) std::swap((*b)[piv], (*b)[row]);
        Rat inv = 1 / A[row][col];
        for (long j = col; j < n; ++j) A[row][j] = A[row][j] * inv;
        if (b) (*b)[row] = (*b)[row] * inv;
        for (long r = 0; r < m; ++r) {
            if (r == row || sgn(A[r][col]) == 0) continue;
            Rat f = A[r][col];
            for (long j = col; j < n; ++j) A[r][j] = A[r][j] - f * A[row][j];
            if (b) (*b)[r] = (*b)[r] - f * (*b)[row];
        }
        e.pivot_col.push_back(col);
        ++row;
    }
    e.rank = row;
    return e;
}

} // namespace

long q_rank(Mat<Rat> A) {
    if (A.empty()) return 0;
    return echelon(A, nullptr).rank;
}

std::optional<std::vector<Rat>> q_solve_unique(Mat<Rat> A, std::vector<Rat> b) {
    long n = mat_rows(A);
    if (n == 0 || mat_cols(A) != n || static_cast<long>(b.size()) != n)
        fail(errc::shape_mismatch, "square solve shape");
    Echelon e = echelon(A, &b);
    if (e.rank < n) return std::nullopt;
    return b;
}

std::optional<std::vector<Rat>> q_solve(Mat<Rat> A, std::vector<Rat> b) {
    long m = mat_rows(A), n = mat_cols(A);
    if (m == 0 || static_cast<long>(b.size()) != m)
        fail(errc::shape_mismatch, "solve shape");
    Echelon e = echelon(A, &b);
    for (long r = e.rank; r < m; ++r)
        if (sgn(b[r]) != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (long r = 0; r < e.rank; ++r) x[e.pivot_col[r]] = b[r];
    return x;
}

std::vector<std::vector<Rat>> q_kernel(Mat<Rat> A) {
    long n = mat_cols(A);
    if (n == 0) return {};
    Echelon e = echelon(A, nullptr);
    std::vector<bool> is_pivot(n, false);
    for (long c : e.pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (long free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[free] = 1;
        for (long r = 0; r < e.rank; ++r) v[e.pivot_col[r]] = -A[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Mat<Rat>> q_inverse(const Mat<Rat>& A) {
    long n = mat_rows(A);
    if (n == 0 || mat_cols(A) != n) fail(errc::shape_mismatch, "inverse of a non-square matrix");
    Mat<Rat> aug(n, std::vector<Rat>(2 * n, Rat(0)));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) aug[i][j] = A[i][j];
        aug[i][n + i] = 1;
    }
    Echelon e = echelon(aug, nullptr);
    if (e.rank < n) return std::nullopt;
    Mat<Rat> inv(n, std::vector<Rat>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

std::vector<Rat> charpoly(const Mat<Rat>& A) {
    long d = mat_rows(A);
    if (d == 0 || mat_cols(A) != d) fail(errc::shape_mismatch, "characteristic polynomial needs a square matrix");
    // Faddeev-LeVerrier: M_1 = A, c_{d-k} from traces, all exact over Q.
    std::vector<Rat> c(d + 1, Rat(0));
    c[d] = 1;
    Mat<Rat> M = A;
    for (long k = 1; k <= d; ++k) {
        Rat tr(0);
        for (long i = 0; i < d; ++i) tr += M[i][i];
        Rat ck = -tr / Rat(k);
        c[d - k] = ck;
        if (k == d) break;
        for (long i = 0; i < d; ++i) M[i][i] += ck;
        M = mat_mul(A, M);
    }
    return c;
}

long qp_deg(const QPoly& p) { return static_cast<long>(p.size()) - 1; }

void qp_trim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qp_trim(r);
    return r;
}

Rat qp_eval(const QPoly& p, const Rat& x) {
    Rat acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

QPoly qp_gcd(QPoly a, QPoly b) {
    qp_trim(a);
    qp_trim(b);
    while (!b.empty()) {
        // remainder of a by b
        while (qp_deg(a) >= qp_deg(b) && !a.empty()) {
            Rat f = a.back() / b.back();
            long shift = qp_deg(a) - qp_deg(b);
            for (long i = 0; i <= qp_deg(b); ++i) a[i + shift] -= f * b[i];
            qp_trim(a);
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& x : a) x = x / lead;
    }
    return a;
}

QPoly qp_shift(const QPoly& p, long k) {
    QPoly r;
    QPoly lin{Rat(k), Rat(1)};
    for (size_t i = p.size(); i-- > 0;) {
        r = qp_mul(r, lin);
        if (r.empty()) r = {Rat(0)};
        r[0] += p[i];
        qp_trim(r);
    }
    return r;
}

namespace {

// Cauchy bound on integer roots of a monic-after-scaling polynomial.
long integer_root_bound(const QPoly& p) {
    Rat top = p.back();
    Rat best(0);
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        Rat m = abs(p[i] / top);
        if (m > best) best = m;
    }
    long b = rat_ceil(best) + 1;
    if (b > 100000) fail(errc::not_implemented, "integer root bound too large to scan");
    return b;
}

} // namespace

std::optional<long> nonzero_integer_root(const QPoly& p) {
    QPoly q = p;
    qp_trim(q);
    if (q.empty()) fail(errc::zero_input, "integer roots of the zero polynomial");
    size_t strip = 0;
    while (strip < q.size() && sgn(q[strip]) == 0) ++strip;
    q.erase(q.begin(), q.begin() + strip);
    if (q.size() <= 1) return std::nullopt;
    long bound = integer_root_bound(q);
    for (long k = 1; k <= bound; ++k) {
        if (sgn(qp_eval(q, Rat(k))) == 0) return k;
        if (sgn(qp_eval(q, Rat(-k))) == 0) return -k;
    }
    return std::nullopt;
}

std::optional<std::string> prepared_obstruction(const Mat<Rat>& A) {
    QPoly chi = charpoly(A);
    if (auto k = nonzero_integer_root(chi))
        return "integer eigenvalue " + std::to_string(*k);
    long bound = 2 * integer_root_bound(chi);
    for (long k = 1; k <= bound; ++k) {
        QPoly g = qp_gcd(chi, qp_shift(chi, k));
        if (qp_deg(g) >= 1) return "integer eigenvalue gap " + std::to_string(k);
    }
    return std::nullopt;
}

LaurentPoly lp_divexact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) fail(errc::division_by_zero, "exact division by zero");
    if (a.is_zero()) return LaurentPoly(a.nvars());
    if (a.nvars() != 1 || b.nvars() != 1)
        fail(errc::internal_error, "exact Laurent division is one-variable");
    auto lead = [](const LaurentPoly& p) { return *p.terms().rbegin(); };
    long min_q = a.min_exp(0) - b.min_exp(0);
    LaurentPoly q(1), rem = a;
    while (!rem.is_zero()) {
        auto [ea, ca] = lead(rem);
        auto [eb, cb] = lead(b);
        long e = ea[0] - eb[0];
        if (e < min_q) fail(errc::internal_error, "inexact Laurent division");
        LaurentPoly term = LaurentPoly::monomial(1, {static_cast<int>(e)}, ca / cb);
        q = q + term;
        rem = rem - term * b;
    }
    return q;
}

LaurentPoly lp_det(Mat<LaurentPoly> A) {
    mat_check(A);
    long d = mat_rows(A);
    if (d == 0 || mat_cols(A) != d) fail(errc::shape_mismatch, "determinant of a non-square matrix");
    int nv = A[0][0].nvars();
    if (d == 1) return A[0][0];
    if (d == 2) return A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (nv != 1) fail(errc::internal_error, "large determinants are one-variable");
    // Bareiss: entries stay true minors, divisions are exact.
    int sign = 1;
    LaurentPoly prev = LaurentPoly::constant(nv, Rat(1));
    for (long k = 0; k + 1 < d; ++k) {
        long piv = -1;
        for (long r = k; r < d; ++r)
            if (!A[r][k].is_zero()) { piv = r; break; }
        if (piv < 0) return LaurentPoly(nv);
        if (piv != k) {
            std::swap(A[piv], A[k]);
            sign = -sign;
        }
        for (long i = k + 1; i < d; ++i)
            for (long j = k + 1; j < d; ++j)
                A[i][j] = lp_divexact(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev);
        prev = A[k][k];
    }
    return sign < 0 ? -A[d - 1][d - 1] : A[d - 1][d - 1];
}

LinearSolution lp_cramer(const Mat<LaurentPoly>& A, const std::vector<LaurentPoly>& b) {
    mat_check(A);
    long d = mat_rows(A);
    if (mat_cols(A) != d || static_cast<long>(b.size()) != d)
        fail(errc::shape_mismatch, "Cramer solve shape");
    LinearSolution sol;
    sol.det = lp_det(A);
    if (sol.det.is_zero()) return sol;
    sol.num.resize(d);
    for (long i = 0; i < d; ++i) {
        Mat<LaurentPoly> Ai = A;
        for (long r = 0; r < d; ++r) Ai[r][i] = b[r];
        sol.num[i] = lp_det(Ai);
    }
    for (long r = 0; r < d; ++r) {
        LaurentPoly acc = A[r][0] * sol.num[0];
        for (long k = 1; k < d; ++k) acc = acc + A[r][k] * sol.num[k];
        if (acc != b[r] * sol.det) fail(errc::internal_error, "Cramer identity failed");
    }
    return sol;
}

} // namespace merom
