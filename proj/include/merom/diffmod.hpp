#ifndef MEROM_DIFFMOD_HPP
#define MEROM_DIFFMOD_HPP

#include <cstdint>
#include <string>

#include "merom/ratfunc.hpp"
#include "merom/twisted.hpp"

namespace merom {

// Matrix presentation of a connection on a free module over the Laurent ring
// with poles confined to x_1..x_m. The acting derivation is D_i = x_i d/dx_i
// for i < poles (0-based) and d/dx_i past that; nabla_i(v) = D_i(v) + N_i v.
struct DiffModule {
    int nvars = 0;
    int poles = 0;
    long rank = 0;
    std::vector<Mat<LaurentPoly>> mats; // one square matrix per variable

    void validate() const; // shapes and pole locations
    LaurentPoly derive(const LaurentPoly& f, int i) const;
};

// Exact commutation check D_i(N_j) - D_j(N_i) + [N_i, N_j] = 0 for all pairs.
bool is_integrable(const DiffModule& m);

// Rank-1 module E(phi) with N_i = [D_i(phi)]. PoleOutsideDivisor when phi has
// a pole past the divisor.
DiffModule e_phi(const LaurentPoly& phi, int nvars, int poles);

DiffModule direct_sum(const DiffModule& a, const DiffModule& b);
DiffModule tensor(const DiffModule& a, const DiffModule& b);
DiffModule dual(const DiffModule& m);
DiffModule end_module(const DiffModule& m);
DiffModule exterior_power(const DiffModule& m, long k);

// Substitute x_i -> y_i^h for the pole variables; log matrices pick up a
// factor of h and pole exponents stretch.
DiffModule kummer_pullback(const DiffModule& m, long h);

// Gauge change v = U w for U invertible over the Laurent ring; the new
// matrices are U^-1 N_i U + U^-1 D_i(U). The determinant must be a unit
// monomial so the inverse stays a Laurent matrix.
DiffModule gauge_transform(const DiffModule& m, const Mat<LaurentPoly>& u);

// One elementary-decomposition term E(phi) (x) R: a twist together with the
// commuting constant log actions of the regular part R along x_1..x_m.
struct GoodTerm {
    LaurentPoly phi;
    long rank = 0;
    std::vector<Mat<Rat>> blocks;
};

struct GoodModel {
    int nvars = 0;
    int poles = 0;
    std::vector<GoodTerm> terms;

    long rank() const;
    void validate() const; // shapes, commutation, prepared eigenvalues
};

DiffModule realize(const GoodModel& g);

struct GoodnessViolation {
    std::vector<size_t> which; // one term index, or the pair whose difference fails
    LaurentPoly witness;       // the cofactor that is not a unit
    std::string reason;        // "not-monomial-unit" or "difference-not-monomial-unit"
};

struct GoodnessReport {
    bool admissible = false;
    bool good = false;
    std::vector<GoodnessViolation> violations;
};

// Condition (a): each twist with a pole is a monomial in 1/x_1..1/x_m times a
// unit; condition (b): likewise every pairwise difference of twists.
GoodnessReport check_good(const GoodModel& g);

// Merge terms whose twists differ by a pole-free polynomial; the regular
// difference gauges away formally, so merged blocks stack block-diagonally.
// InvariantViolation when a merge breaks prepared eigenvalues. Idempotent.
GoodModel minimalize(const GoodModel& g);

// One-variable modules are DiffModule with nvars = 1; poles selects the twist.
Twist module_twist(const DiffModule& m);

// Monic twisted polynomial P of degree rank with E{T}/E{T}P isomorphic to m.
// Tries standard basis vectors, then a fixed polynomial vector, then random
// small-integer combinations; every candidate is verified by an exact Cramer
// identity before acceptance. CyclicSearchFailed after bounded attempts.
TwistedPoly cyclic_vector(const DiffModule& m, long prec = default_prec,
                          uint64_t seed = 0);

// Newton-polygon slope multiset of the cyclic polynomial, ascending with
// multiplicity. Splits off block-diagonal components first and works from
// exact coefficient valuations, so no series division is involved.
std::vector<Rat> module_slopes(const DiffModule& m);

// f_i = max(s, slope_i), sorted descending; length = rank.
std::vector<Rat> scale_multiset(const DiffModule& m, const Rat& s);

// Slope filtration of the cyclic presentation: step j is spanned by the
// residues T^i * F_{j+1}..F_k mod P where P = F_1..F_k is the slope
// factorization with slopes descending.
struct ScaleFiltration {
    TwistedPoly cyclic;
    std::vector<TwistedPoly> factors;            // pure-slope, slopes descending
    std::vector<Rat> graded_slopes;              // one per factor
    std::vector<std::vector<TwistedPoly>> steps; // ascending chain of sub-bases
};

ScaleFiltration scale_filtration(const DiffModule& m, long prec = default_prec,
                                 uint64_t seed = 0);

// Unique U = I + U_1 t + ... with N U + t dU/dt = U N_0, computed to prec by
// the step recursion i U_i + N_0 U_i - U_i N_0 = -sum_{j>=1} N_j U_{i-j}.
// UnpreparedEigenvalues names the first step whose Sylvester operator is
// singular; PrecisionLoss when the input windows cannot justify prec.
Mat<TruncSeries> descend_gauge(const Mat<TruncSeries>& n, long prec);

// tau(lambda) = lambda - floor(lambda), the admissible section of Q -> [0,1).
Rat admissible_section(const Rat& lambda);

} // namespace merom

#endif
