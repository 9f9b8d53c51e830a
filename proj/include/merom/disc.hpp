#ifndef MEROM_DISC_HPP
#define MEROM_DISC_HPP

#include "merom/diffmod.hpp"

namespace merom {

// Radius profile along the central ray of the disc: one row per grid radius
// s > 0, holding the d scale radii sorted descending, each clamped below by s.
struct RadiusProfile {
    int d = 0;
    std::vector<std::pair<Rat, std::vector<Rat>>> samples;
};

// Samples the scale multiset of a one-variable module on a radius grid. The
// Newton slopes are computed once; each row is f_i = max(s, slope_i). The grid
// is sorted and deduplicated.
RadiusProfile profile(const DiffModule& m, const std::vector<Rat>& grid);

struct QuantizationReport {
    bool quantized = true;   // partial-sum slopes lie in (1/d!)Z
    bool convex = true;      // partial-sum slopes nondecreasing in s
    bool level_above = true; // partial sums nonincreasing while f_i > s
    int witness_i = 0;       // 1-based radius index of the first violation
    Rat witness_s;           // right endpoint of the violating segment
};

// Audits the finite differences of the partial sums F_i = f_1 + ... + f_i
// between consecutive samples. Works on any sample table that satisfies the
// RadiusProfile shape invariants; InvariantViolation otherwise.
QuantizationReport slope_quantization_check(const RadiusProfile& p);

struct TerminalReport {
    bool terminal = false;
    std::optional<Rat> becomes_at;
    bool strong = false; // three-point certificate over [strong_lo, strong_hi]
    Rat strong_lo;
    Rat strong_hi;
};

// A profile is terminal when every radius is a constant clamped to the
// diagonal, f_i = max(s, c_i), across the whole grid (becomes_at = 0). When
// the shape only holds from an interior grid point on, becomes_at reports
// that point. The strong certificate takes the first, middle, and last
// samples: each radius must be constant or on the diagonal at all three.
// InsufficientSamples under three samples.
TerminalReport terminal_test(const RadiusProfile& p);

// Formal horizontal sections t v' + N v = 0 for the t d/dt twist, solved
// degreewise to prec terms; solutions may start at any order j < prec with
// -j an eigenvalue of N mod t. A pole with invertible leading matrix has no
// sections; ResonantEigenvalues when the solve meets a singular shift.
std::vector<std::vector<TruncSeries>> horizontal_sections(const DiffModule& m,
                                                          int prec = default_prec);

} // namespace merom

#endif
