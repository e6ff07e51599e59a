#include "rfcw/experiments.hpp"

#include <cmath>

#include "parallel.hpp"
#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

void check_config(const ExperimentConfig& config) {
    if (!(config.beta > 0.0) || !std::isfinite(config.beta))
        throw ArgumentError("experiment: beta must be finite and > 0");
    if (config.replicas < 1) throw ArgumentError("experiment: replicas must be >= 1");
    if (config.n_grid.empty()) throw ArgumentError("experiment: empty N grid");
    int prev = 0;
    for (int n : config.n_grid) {
        if (n <= prev) throw ArgumentError("experiment: N grid must be strictly increasing");
        prev = n;
    }
    if (config.quad) validate(*config.quad);
}

QuadratureSpec quad_for(const ExperimentConfig& config, const ModelParams& params,
                        const FieldSample& sample) {
    if (config.quad) return *config.quad;
    return default_quadrature(params, sample);
}

} // namespace

KRule KRule::fixed(int k) {
    if (k < 1 || k > kMaxWordLen) throw ArgumentError("k rule: fixed k must be in [1, 24]");
    KRule r;
    r.fixed_k = k;
    return r;
}

KRule KRule::power(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw ArgumentError("k rule: exponent must lie in (0, 1/2)");
    KRule r;
    r.is_power = true;
    r.alpha = alpha;
    return r;
}

int KRule::k_for(int n) const {
    if (!is_power) return fixed_k;
    const int k = static_cast<int>(std::ceil(std::pow(n, alpha)));
    return std::min(std::max(k, 1), std::min(n, kMaxWordLen));
}

std::uint64_t replica_seed(std::uint64_t base, int replica, int n) {
    const std::uint64_t stream = base + static_cast<std::uint64_t>(replica);
    return splitmix64(splitmix64(stream) ^
                      (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n)));
}

std::vector<ConvergenceRow> chaos_convergence_scan(const ExperimentConfig& config) {
    check_config(config);
    const auto report = find_global_maxima(config.spec, config.beta);
    if (report.maxima.size() != 1)
        throw ArgumentError(
            "chaos_convergence_scan: multiple global maxima; use j_index_statistics");
    const double y0 = report.maxima[0].location;

    for (int n : config.n_grid) {
        const int k = config.k_rule.k_for(n);
        if (k > std::min(n, kMaxWordLen))
            throw ArgumentError("chaos_convergence_scan: k exceeds min(N, 24)");
    }

    const std::size_t reps = static_cast<std::size_t>(config.replicas);
    std::vector<ConvergenceRow> rows(config.n_grid.size() * reps);
    detail::parallel_for(rows.size(), [&](std::size_t idx) {
        const int n = config.n_grid[idx / reps];
        const int r = static_cast<int>(idx % reps);
        const int k = config.k_rule.k_for(n);
        ConvergenceRow& row = rows[idx];
        row.n = n;
        row.k = k;
        row.seed = replica_seed(config.base_seed, r, n);
        row.j_index = 0;
        const auto sample = sample_field(config.spec, static_cast<std::size_t>(n), row.seed);
        const ModelParams params{config.beta, n};
        const auto mu = marginal_quadrature(params, sample, k, quad_for(config, params, sample));
        const auto rho = product_marginal(
            config.beta, y0, std::span<const double>(sample.values.data(),
                                                     static_cast<std::size_t>(k)));
        row.kl = kl_divergence(mu, rho);
        row.tv = tv_distance(mu, rho);
    });
    return rows;
}

JIndexReport j_index_statistics(const ExperimentConfig& config) {
    check_config(config);
    if (!(config.spec.second_moment() > 0.0))
        throw ArgumentError("j_index_statistics: field law must have positive second moment");
    const auto report = find_global_maxima(config.spec, config.beta);
    const std::size_t n_max = report.maxima.size();
    if (n_max < 2)
        throw ArgumentError("j_index_statistics: need at least two global maxima");

    const std::size_t reps = static_cast<std::size_t>(config.replicas);
    JIndexReport out;
    out.rows.resize(config.n_grid.size() * reps);
    detail::parallel_for(out.rows.size(), [&](std::size_t idx) {
        const int n = config.n_grid[idx / reps];
        const int r = static_cast<int>(idx % reps);
        const int k = config.k_rule.k_for(n);
        JIndexRow& row = out.rows[idx];
        row.n = n;
        row.k = k;
        row.seed = replica_seed(config.base_seed, r, n);
        const auto sample = sample_field(config.spec, static_cast<std::size_t>(n), row.seed);
        const ModelParams params{config.beta, n};
        row.j_index = select_j_index(sample, config.spec, config.beta, report);
        const auto prefix =
            std::span<const double>(sample.values.data(), static_cast<std::size_t>(k));
        const auto mu = marginal_quadrature(params, sample, k, quad_for(config, params, sample));
        const auto rho = predicted_product(config.beta, report, row.j_index, prefix);
        row.kl = kl_divergence(mu, rho);
        row.tv = tv_distance(mu, rho);
        const std::size_t mirror = n_max - 1 - row.j_index;
        const auto rho_other = predicted_product(config.beta, report, mirror, prefix);
        row.tv_other = tv_distance(mu, rho_other);
    });
    out.counts.assign(n_max, 0);
    for (const auto& row : out.rows) ++out.counts[row.j_index];
    return out;
}

CltDiagnostic clt_diagnostic(const FieldSpec& spec, double beta, double y0, int n, int replicas,
                             std::uint64_t seed) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ArgumentError("clt_diagnostic: beta must be finite and > 0");
    if (!std::isfinite(y0)) throw ArgumentError("clt_diagnostic: y0 must be finite");
    if (n < 1) throw ArgumentError("clt_diagnostic: n must be >= 1");
    if (replicas < 100) throw ArgumentError("clt_diagnostic: need at least 100 replicas");

    std::vector<double> draws(static_cast<std::size_t>(replicas));
    const double root_n = std::sqrt(static_cast<double>(n));
    detail::parallel_for(draws.size(), [&](std::size_t r) {
        const auto sample = sample_field(spec, static_cast<std::size_t>(n),
                                         replica_seed(seed, static_cast<int>(r), n));
        draws[r] = root_n * fluctuation(sample, spec, beta, y0);
    });

    CltDiagnostic diag;
    diag.replicas = replicas;
    double mean = 0.0;
    for (double x : draws) mean += x;
    mean /= static_cast<double>(replicas);
    double var = 0.0;
    for (double x : draws) var += (x - mean) * (x - mean);
    var /= static_cast<double>(replicas - 1);
    diag.empirical_mean = mean;
    diag.empirical_variance = var;

    // Var log cosh(sqrt(beta) y0 + beta h) under the field law
    const double a = std::sqrt(beta);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& atom : spec.support()) {
        const double x = std::fabs(a * y0 + beta * atom.value);
        const double lc = x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
        m1 += atom.prob * lc;
        m2 += atom.prob * lc * lc;
    }
    diag.analytic_variance = m2 - m1 * m1;
    return diag;
}

} // namespace rfcw
