#ifndef MEROM_IRREGULARITY_HPP
#define MEROM_IRREGULARITY_HPP

#include "merom/diffmod.hpp"

namespace merom {

// Piecewise linear function on the weight orthant in tropical-sum form:
// F(r) = sum of weight * max(0, <a, r>). Convex by construction.
struct PLTerm {
    long weight = 0;
    std::vector<long> a;
};

struct PLFunction {
    int nvars = 0;
    std::vector<PLTerm> terms;

    Rat eval(const std::vector<Rat>& r) const;
    ValueElt eval(const std::vector<ValueElt>& r) const;
};

// Irregularity of a realized good model along Gauss weights:
// F(r) = sum over pole-carrying terms of rank * max(0, -v_r(phi)).
// InvariantViolation when the model is not admissible.
PLFunction irr_good(const GoodModel& g);

// Same for End of the realization, summed over ordered pairs of terms. The
// pairwise twist differences must decompose into hinge terms (supports of
// size at most two after factoring the monomial content); NotImplemented
// otherwise.
PLFunction end_irr_good(const GoodModel& g);

// Restriction to the monomial curve x_i = c_i t^{a_i}; the log derivation
// pulls back to t d/dt with matrix sum a_i N_i (log variables) plus
// a_i c_i t^{a_i} N_i (ordinary variables).
DiffModule restrict_to_curve(const DiffModule& m, const std::vector<Rat>& c,
                             const std::vector<long>& a);

// Irregularity at one integer weight by curve restriction: the sum of the
// positive cyclic slopes. Two independent constant draws must agree;
// GenericityFailure surfaces a disagreement. Integrability of m is the
// caller's responsibility.
Rat irr_at(const DiffModule& m, const std::vector<long>& a, uint64_t seed = 0);

// Retrying form of irr_at: on GenericityFailure redraws with fresh constants
// from a range that grows sixteenfold per attempt. Rethrows after the last
// attempt. The first attempt reproduces irr_at(m, a, seed) exactly.
Rat irr_at_robust(const DiffModule& m, const std::vector<long>& a,
                  uint64_t seed = 0, int attempts = 4);

struct NumericalityCertificate {
    bool numerical = false;
    std::vector<Rat> functional;  // F(a) = <functional, a> when numerical
    std::vector<long> witness_u;  // otherwise F(u) + F(v) != F(u + v)
    std::vector<long> witness_v;
};

// Samples irr_at on the integer weights with sum(a_i - 1) <= max(2, bound),
// fits one linear functional exactly, and verifies it on every sample.
NumericalityCertificate is_numerical(const DiffModule& m, long degree_bound = 2,
                                     uint64_t seed = 0);

struct TurningReport {
    bool pass = false;
    NumericalityCertificate module_cert;
    NumericalityCertificate end_cert;
};

// No turning point at the monomial valuations iff both the module and its
// endomorphism module are numerical.
TurningReport turning_test(const DiffModule& m, long degree_bound = 2,
                           uint64_t seed = 0);

inline bool midpoint_convex(const Rat& fu, const Rat& fv, const Rat& fmid) {
    return fu + fv >= fmid * 2;
}

struct ConvexityReport {
    bool convex = true;
    bool monotone = true;
    std::vector<long> witness_u; // failing segment endpoints or axis triple base
    std::vector<long> witness_v;
};

// Subadditivity on random weight pairs (equivalent to convexity for a
// degree-one homogeneous function) and monotone decrease in every non-pole
// coordinate.
ConvexityReport convexity_audit(const DiffModule& m, int samples = 20,
                                uint64_t seed = 0);

} // namespace merom

#endif
