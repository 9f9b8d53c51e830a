#ifndef MEROM_TORIC_HPP
#define MEROM_TORIC_HPP

#include "merom/irregularity.hpp"

namespace merom {

// Simplicial cone inside the closed positive orthant, spanned by primitive
// integer rays. Plane cones keep their rays sorted by increasing slope;
// higher dimensions sort them lexicographically.
struct Cone {
    std::vector<std::vector<long>> rays;
};

// Monomial substitution x_i -> prod_j y_j^{a[i][j]} with unimodular a, so
// weight vectors pull back as r = a r'. inv_nonneg records that the inverse
// matrix is entrywise nonnegative.
struct Chart {
    Mat<long> a;
    bool inv_nonneg = false;
};

// Euclidean reduction of positive scales c_1..c_s whose first r entries are a
// basis of the span of all of them: returns a unimodular chart with
// nonnegative inverse such that (a c) has r positive entries followed by
// zeros. SpanMismatch when the basis precondition fails, NotImplemented for
// more than four scales.
Chart perron(const std::vector<ValueElt>& c, int r);

// Fan of simplicial cones covering the positive orthant on which f is linear,
// obtained by slicing along the kernel planes of the mixed-sign hinges. Up to
// three variables; DimensionUnsupported beyond.
std::vector<Cone> linearity_fan(const PLFunction& f);

// Subdivides plane cones into unimodular chains by repeated insertion of
// lattice rays. Smooth cones pass through unchanged; non-smooth cones in three
// or more variables are refused.
std::vector<Cone> refine_smooth(const std::vector<Cone>& cones);

// One chart per cone of the smooth common linearity fan, with the linear
// forms that the two invariants pull back to: f(a w) = sum_j functional[j] w_j
// on the positive orthant.
struct LinearizedChart {
    Chart chart;
    std::vector<Rat> module_functional;
    std::vector<Rat> end_functional;
};

std::vector<LinearizedChart> linearize(const PLFunction& f_module,
                                       const PLFunction& f_end);

// Pulls a good model back along a chart: pole parts by monomial substitution,
// residue blocks by the column combinations of the logarithmic directions.
// PoleEscape when a chart entry is negative or maps a pole variable across
// the ordinary divisor.
GoodModel pullback_good(const GoodModel& g, const Chart& chart);

}  // namespace merom

#endif
