#ifndef MEROM_RATFUNC_HPP
#define MEROM_RATFUNC_HPP

#include <optional>
#include <string>
#include <vector>

#include "merom/laurent.hpp"
#include "merom/series.hpp"

namespace merom {

// Dense row-major matrix over an exact coefficient ring (Rat, LaurentPoly,
// TruncSeries). Everything here is exact; solvers report failure instead of
// approximating.
template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
long mat_rows(const Mat<T>& A) { return static_cast<long>(A.size()); }

template <class T>
long mat_cols(const Mat<T>& A) { return A.empty() ? 0 : static_cast<long>(A[0].size()); }

template <class T>
void mat_check(const Mat<T>& A) {
    for (auto& row : A)
        if (static_cast<long>(row.size()) != mat_cols(A))
            fail(errc::shape_mismatch, "ragged matrix");
}

template <class T>
Mat<T> mat_add(const Mat<T>& A, const Mat<T>& B) {
    if (mat_rows(A) != mat_rows(B) || mat_cols(A) != mat_cols(B))
        fail(errc::shape_mismatch, "matrix sum shape");
    Mat<T> R = A;
    for (long i = 0; i < mat_rows(A); ++i)
        for (long j = 0; j < mat_cols(A); ++j) R[i][j] = A[i][j] + B[i][j];
    return R;
}

template <class T>
Mat<T> mat_sub(const Mat<T>& A, const Mat<T>& B) {
    if (mat_rows(A) != mat_rows(B) || mat_cols(A) != mat_cols(B))
        fail(errc::shape_mismatch, "matrix difference shape");
    Mat<T> R = A;
    for (long i = 0; i < mat_rows(A); ++i)
        for (long j = 0; j < mat_cols(A); ++j) R[i][j] = A[i][j] - B[i][j];
    return R;
}

template <class T>
Mat<T> mat_neg(const Mat<T>& A) {
    Mat<T> R = A;
    for (auto& row : R)
        for (auto& x : row) x = -x;
    return R;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& A, const Mat<T>& B) {
    if (mat_cols(A) != mat_rows(B) || mat_cols(A) == 0)
        fail(errc::shape_mismatch, "matrix product shape");
    Mat<T> R(mat_rows(A), std::vector<T>(mat_cols(B)));
    for (long i = 0; i < mat_rows(A); ++i)
        for (long j = 0; j < mat_cols(B); ++j) {
            T acc = A[i][0] * B[0][j];
            for (long k = 1; k < mat_cols(A); ++k) acc = acc + A[i][k] * B[k][j];
            R[i][j] = acc;
        }
    return R;
}

template <class T, class S>
Mat<T> mat_scale(const Mat<T>& A, const S& c) {
    Mat<T> R = A;
    for (auto& row : R)
        for (auto& x : row) x = x * c;
    return R;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& A, const std::vector<T>& v) {
    if (mat_cols(A) != static_cast<long>(v.size()) || v.empty())
        fail(errc::shape_mismatch, "matrix-vector shape");
    std::vector<T> r(mat_rows(A));
    for (long i = 0; i < mat_rows(A); ++i) {
        T acc = A[i][0] * v[0];
        for (long k = 1; k < mat_cols(A); ++k) acc = acc + A[i][k] * v[k];
        r[i] = acc;
    }
    return r;
}

template <class T>
Mat<T> mat_transpose(const Mat<T>& A) {
    Mat<T> R(mat_cols(A), std::vector<T>(mat_rows(A)));
    for (long i = 0; i < mat_rows(A); ++i)
        for (long j = 0; j < mat_cols(A); ++j) R[j][i] = A[i][j];
    return R;
}

template <class T>
Mat<T> mat_identity(long d, const T& one, const T& zero) {
    Mat<T> R(d, std::vector<T>(d, zero));
    for (long i = 0; i < d; ++i) R[i][i] = one;
    return R;
}

// Kronecker product; block (i,j) is A[i][j] * B.
template <class T>
Mat<T> kron(const Mat<T>& A, const Mat<T>& B) {
    long ra = mat_rows(A), ca = mat_cols(A), rb = mat_rows(B), cb = mat_cols(B);
    Mat<T> R(ra * rb, std::vector<T>(ca * cb));
    for (long i = 0; i < ra; ++i)
        for (long j = 0; j < ca; ++j)
            for (long k = 0; k < rb; ++k)
                for (long l = 0; l < cb; ++l)
                    R[i * rb + k][j * cb + l] = A[i][j] * B[k][l];
    return R;
}

// ---- exact linear algebra over Q ----

long q_rank(Mat<Rat> A);

// Unique solution of a square system; nullopt when the matrix is singular.
std::optional<std::vector<Rat>> q_solve_unique(Mat<Rat> A, std::vector<Rat> b);

// Some solution of a general system with free unknowns set to zero; nullopt
// when inconsistent.
std::optional<std::vector<Rat>> q_solve(Mat<Rat> A, std::vector<Rat> b);

// Basis of the null space.
std::vector<std::vector<Rat>> q_kernel(Mat<Rat> A);

std::optional<Mat<Rat>> q_inverse(const Mat<Rat>& A);

// Monic characteristic polynomial, ascending coefficients, length d+1.
std::vector<Rat> charpoly(const Mat<Rat>& A);

// ---- dense univariate polynomials over Q (ascending, no trailing zeros) ----

using QPoly = std::vector<Rat>;

long qp_deg(const QPoly& p); // -1 for the zero polynomial
void qp_trim(QPoly& p);
QPoly qp_mul(const QPoly& a, const QPoly& b);
Rat qp_eval(const QPoly& p, const Rat& x);
QPoly qp_gcd(QPoly a, QPoly b); // monic
QPoly qp_shift(const QPoly& p, long k); // p(x + k)

// Smallest-magnitude nonzero integer root, if any.
std::optional<long> nonzero_integer_root(const QPoly& p);

// A matrix is prepared when no eigenvalue and no difference of two eigenvalues
// is a nonzero integer. Returns a human-readable obstruction, or nullopt.
// Integer candidates are scanned inside an exact root bound; a bound too large
// to scan is an error, never a silent pass.
std::optional<std::string> prepared_obstruction(const Mat<Rat>& A);
inline bool is_prepared(const Mat<Rat>& A) { return !prepared_obstruction(A).has_value(); }

// ---- exact linear algebra over one-variable Laurent polynomials ----

// Exact quotient a / b; InternalError when b does not divide a.
LaurentPoly lp_divexact(const LaurentPoly& a, const LaurentPoly& b);

// Fraction-free determinant (Bareiss). Entries must share one variable for
// d >= 3; 1x1 and 2x2 work over any number of variables.
LaurentPoly lp_det(Mat<LaurentPoly> A);

// Cramer data for A x = b: x_i = num[i] / det. When det is nonzero the
// reassembled identity A * num == det * b is verified exactly.
struct LinearSolution {
    LaurentPoly det;
    std::vector<LaurentPoly> num;
};
LinearSolution lp_cramer(const Mat<LaurentPoly>& A, const std::vector<LaurentPoly>& b);

} // namespace merom

#endif
