#ifndef RFCW_MODEL_HPP
#define RFCW_MODEL_HPP

#include <span>

#include "rfcw/field.hpp"
#include "rfcw/spin.hpp"

namespace rfcw {

struct ModelParams {
    double beta = 1.0; // inverse temperature, > 0
    int n_sites = 1;
};

void validate(const ModelParams& params);

// Exhaustive enumeration is limited to this many sites.
inline constexpr int kEnumerationMaxSites = 22;

// -(1/2N)(sum_i sigma_i)^2 - sum_i h_i sigma_i
double hamiltonian(std::span<const std::int8_t> sigma, std::span<const double> field);

// Exact Gibbs marginal of the first k sites by summing all 2^N configurations.
// Energies are accumulated as beta-free pieces; beta enters at weight time.
MarginalTable brute_force_marginal(const ModelParams& params, const FieldSample& field, int k);

// Product law with P(sigma_i = +1) = e^t / (2 cosh t), t = sqrt(beta) y + beta h_i.
MarginalTable product_marginal(double beta, double y, std::span<const double> field_prefix);

} // namespace rfcw

#endif
