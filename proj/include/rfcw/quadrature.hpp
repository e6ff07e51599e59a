#ifndef RFCW_QUADRATURE_HPP
#define RFCW_QUADRATURE_HPP

#include <vector>

#include "rfcw/field.hpp"
#include "rfcw/model.hpp"

namespace rfcw {

struct QuadratureSpec {
    double radius = 0.0;     // integration half-width; must cover the tail radius
    double rel_tol = 1e-10;  // in (0, 1e-6]
    int max_refinements = 24; // sweep budget, <= 30
};

void validate(const QuadratureSpec& spec);

// Radius wide enough that the truncated tail is far below rel_tol even for
// small N, plus default tolerances.
QuadratureSpec default_quadrature(const ModelParams& params, const FieldSample& field);

struct LogIntegralResult {
    double log_value = 0.0;
    double est_error = 0.0; // relative
};

// Shared quadrature grid for one density exp(scale * G(y)) on [-radius, radius].
// Nodes carry log(panel weight) + scale * G(node) so every integral against a
// bounded factor reuses the same evaluations.
struct DensityGrid {
    std::vector<double> nodes;
    std::vector<double> log_mass;
    double log_total = 0.0;
    double est_error = 0.0;
    double radius = 0.0;
    int refinements = 0;
};

// Adaptive composite 15-point Gauss-Legendre panels.  Panels are seeded
// uniformly plus at every local maximum of G, then split wherever the
// single-panel and split-panel estimates disagree by more than rel_tol of
// the running total.
DensityGrid build_density_grid(const WeightedValues& mu, double beta, double scale,
                               const QuadratureSpec& spec);

} // namespace rfcw

#endif
