#ifndef RFCW_MARGINALS_HPP
#define RFCW_MARGINALS_HPP

#include <cstdint>
#include <vector>

#include "rfcw/field.hpp"
#include "rfcw/landscape.hpp"
#include "rfcw/model.hpp"
#include "rfcw/quadrature.hpp"
#include "rfcw/spin.hpp"

namespace rfcw {

// log Z = N log 2 + (1/2) log(N / 2 pi) + log integral exp(N G_N(y)) dy.
LogIntegralResult log_partition(const ModelParams& params, const FieldSample& field,
                                const QuadratureSpec& quad);

// Gibbs marginal of the first k sites via the one-dimensional integral
// representation.  All 2^k numerators and the normalizer share one grid, so
// the table sums to 1 up to roundoff before the final renormalization.
MarginalTable marginal_quadrature(const ModelParams& params, const FieldSample& field, int k,
                                  const QuadratureSpec& quad);

// Draw full configurations: inverse-CDF for the auxiliary coordinate on a
// piecewise-linear density table, then independent site spins given y.
std::vector<std::vector<std::int8_t>> exact_sample(const ModelParams& params,
                                                   const FieldSample& field,
                                                   const QuadratureSpec& quad,
                                                   std::size_t n_samples, std::uint64_t seed);

// Index (into report.maxima, ascending by location) maximizing the sampled
// fluctuation; ties within 1e-14 resolve to the smallest index.
std::size_t select_j_index(const FieldSample& field, const FieldSpec& spec, double beta,
                           const LandscapeReport& report);

// Product law predicted at the j-th maximizer.
MarginalTable predicted_product(double beta, const LandscapeReport& report, std::size_t j,
                                std::span<const double> field_prefix);

} // namespace rfcw

#endif
