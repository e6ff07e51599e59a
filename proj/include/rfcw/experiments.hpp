#ifndef RFCW_EXPERIMENTS_HPP
#define RFCW_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rfcw/field.hpp"
#include "rfcw/marginals.hpp"
#include "rfcw/quadrature.hpp"

namespace rfcw {

// Word length as a function of N: fixed, or ceil(N^alpha) capped at 24.
struct KRule {
    static KRule fixed(int k);
    static KRule power(double alpha);
    int k_for(int n) const;

    bool is_power = false;
    int fixed_k = 1;
    double alpha = 0.0;
};

struct ExperimentConfig {
    FieldSpec spec;
    double beta = 1.0;
    std::vector<int> n_grid;            // strictly increasing
    KRule k_rule = KRule::fixed(1);
    int replicas = 1;
    std::uint64_t base_seed = 0;
    std::optional<QuadratureSpec> quad; // per-sample default when absent
};

struct ConvergenceRow {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::size_t j_index = 0;
    double kl = 0.0;
    double tv = 0.0;
};

// Effective stream for (replica, N): base + replica, with N mixed in by a
// fixed 64-bit hash.
std::uint64_t replica_seed(std::uint64_t base, int replica, int n);

// Marginal-vs-product divergences over the (N, replica) grid.  Requires a
// unique global maximum; degenerate-width maxima are allowed.
std::vector<ConvergenceRow> chaos_convergence_scan(const ExperimentConfig& config);

struct JIndexRow {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::size_t j_index = 0;
    double kl = 0.0;
    double tv = 0.0;
    double tv_other = 0.0; // against the mirrored maximizer
};

struct JIndexReport {
    std::vector<std::size_t> counts; // selections per maximum index
    std::vector<JIndexRow> rows;
};

// Random-index selection statistics; needs at least two maxima and a field
// law with positive second moment.
JIndexReport j_index_statistics(const ExperimentConfig& config);

struct CltDiagnostic {
    int replicas = 0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double analytic_variance = 0.0;
};

// Distribution of sqrt(N) * (sampled - expected surface) at y0 across
// replicas, against the closed-form variance of log cosh(sqrt(b) y0 + b h).
CltDiagnostic clt_diagnostic(const FieldSpec& spec, double beta, double y0, int n, int replicas,
                             std::uint64_t seed);

} // namespace rfcw

#endif
