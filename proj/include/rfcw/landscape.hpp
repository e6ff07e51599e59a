#ifndef RFCW_LANDSCAPE_HPP
#define RFCW_LANDSCAPE_HPP

#include <functional>
#include <vector>

#include "rfcw/field.hpp"

namespace rfcw {

// G(y) = -y^2/2 + E log cosh(sqrt(beta) y + beta h), averaged over mu.
double free_energy(const WeightedValues& mu, double beta, double y);
// Closed-form y-derivative, order 1..8.
double free_energy_deriv(const WeightedValues& mu, double beta, double y, int order);

double free_energy(const FieldSpec& spec, double beta, double y);
double free_energy_deriv(const FieldSpec& spec, double beta, double y, int order);
double empirical_free_energy(const FieldSample& sample, double beta, double y);
double empirical_free_energy_deriv(const FieldSample& sample, double beta, double y, int order);

// Difference of the sampled and expected surfaces (order 0) or of their
// derivatives (order 1..2).
double fluctuation(const FieldSample& sample, const FieldSpec& spec, double beta, double y,
                   int order = 0);

// Radius beyond which the surface sits below -y^2/4.
double tail_radius(const FieldSpec& spec, double beta);
double tail_radius(const FieldSample& sample, double beta);

struct MaximumRecord {
    double location = 0.0;
    double value = 0.0;
    int degeneracy_n = 1;              // 1 = simple quadratic peak
    double leading_derivative = 0.0;   // first non-vanishing even derivative, < 0
    double curvature = 0.0;            // -G''; exactly 0 for degenerate peaks
};

struct LandscapeReport {
    std::vector<MaximumRecord> maxima; // ascending by location
    double tail_radius = 0.0;
    double scan_tolerance = 0.0;
};

struct DegeneracyRecord {
    int degeneracy_n = 1;
    double leading_derivative = 0.0;
};

// Smallest n <= 4 with derivatives 2..2n-1 within tol_deg of zero and the
// 2n-th strictly below -tol_deg.
DegeneracyRecord classify_maximum(const FieldSpec& spec, double beta, double y0,
                                  double tol_deg = 1e-7);

// Global maxima over [-R, R]: grid scan of G', bracketed refinement to
// |G'| <= tol, dedupe within 1e-8, keep values within 1e-10 of the best.
LandscapeReport find_global_maxima(const FieldSpec& spec, double beta, double tol = 1e-12);

// Locations of local maxima of a smooth function given its derivative,
// detected as + -> - sign changes of deriv on a regular grid over [lo, hi]
// and refined by bracketed bisection with Newton acceleration.
std::vector<double> local_maxima(const std::function<double(double)>& deriv,
                                 const std::function<double(double)>& second_deriv,
                                 double lo, double hi, double step, double tol);

} // namespace rfcw

#endif
