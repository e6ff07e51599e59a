#ifndef RFCW_PHASE_HPP
#define RFCW_PHASE_HPP

#include <vector>

#include "rfcw/landscape.hpp"

namespace rfcw {

// Classification of the +-h equal-weight field at a given (beta, h).
enum class PhaseCase {
    ParaUnique,          // below the critical line: one simple maximum at 0
    SecondOrderCritical, // on the line, h <= h_tri: one degenerate maximum at 0
    FirstOrderTriple,    // on the line, h > h_tri: three tied maxima
    FerroPair,           // above the line: two symmetric maxima
    HighFieldUnique      // h >= 1/2: one maximum at 0 for every beta
};

const char* to_string(PhaseCase c);

struct RegimeLabel {
    PhaseCase phase = PhaseCase::ParaUnique;
    int degeneracy_n = 1;
    int n_maxima = 1;
};

struct CriticalPoint {
    double h_field = 0.0;
    double beta_crit = 0.0;
    enum class Order { second, first } order = Order::second;
};

// Smallest beta in [1, 10] with beta sech^2(beta h) = 1, bisected to 1e-12.
// Defined for 0 <= h <= h_tri; beyond that the curvature root is no longer
// the transition.
double second_order_beta(double h_field);

// For h in (h_tri, 1/2): beta at which the best off-center value of the
// surface ties with its value at 0, bisected on the sign of the gap.
double first_order_beta(double h_field);

// (h_tri, beta_tri) = ((2/3) arcosh(sqrt(3/2)), 3/2).
CriticalPoint tricritical_point();

// Critical beta for any h in [0, 1/2), dispatching on the segment.
double critical_beta(double h_field);

RegimeLabel classify_regime(double beta, double h_field);

std::vector<CriticalPoint> trace_phase_line(double h_max, int steps);

} // namespace rfcw

#endif
