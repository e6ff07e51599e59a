#include "rfcw/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

void check_problem(const ModelParams& params, const FieldSample& field,
                   const QuadratureSpec& quad) {
    validate(params);
    validate(quad);
    if (static_cast<std::size_t>(params.n_sites) != field.values.size())
        throw ArgumentError("field length must equal n_sites");
    if (quad.radius < tail_radius(field, params.beta))
        throw ArgumentError("quadrature radius below the sample tail radius");
}

double uniform_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace

LogIntegralResult log_partition(const ModelParams& params, const FieldSample& field,
                                const QuadratureSpec& quad) {
    check_problem(params, field, quad);
    const auto grid = build_density_grid(measure_of(field), params.beta,
                                         static_cast<double>(params.n_sites), quad);
    const double n = params.n_sites;
    LogIntegralResult out;
    out.log_value = n * std::log(2.0) + 0.5 * std::log(n / kTwoPi) + grid.log_total;
    out.est_error = grid.est_error;
    return out;
}

MarginalTable marginal_quadrature(const ModelParams& params, const FieldSample& field, int k,
                                  const QuadratureSpec& quad) {
    check_problem(params, field, quad);
    if (k < 1 || k > std::min(params.n_sites, kMaxWordLen))
        throw ArgumentError("marginal_quadrature: need 1 <= k <= min(N, 24)");

    const auto grid = build_density_grid(measure_of(field), params.beta,
                                         static_cast<double>(params.n_sites), quad);
    const double a = std::sqrt(params.beta);
    const std::size_t words = std::size_t{1} << k;

    std::vector<double> bucket(words, 0.0);
    std::vector<double> expand(words), p_up(static_cast<std::size_t>(k));
    double denom = 0.0;
    for (std::size_t m = 0; m < grid.nodes.size(); ++m) {
        const double share = std::exp(grid.log_mass[m] - grid.log_total);
        if (share == 0.0) continue;
        denom += share;
        const double y = grid.nodes[m];
        for (int i = 0; i < k; ++i) {
            const double t = a * y + params.beta * field.values[static_cast<std::size_t>(i)];
            p_up[static_cast<std::size_t>(i)] = 1.0 / (1.0 + std::exp(-2.0 * t));
        }
        expand[0] = share;
        std::size_t filled = 1;
        for (int i = 0; i < k; ++i) {
            const double p = p_up[static_cast<std::size_t>(i)];
            for (std::size_t w = filled; w-- > 0;) {
                const double v = expand[w];
                expand[2 * w] = v * p;
                expand[2 * w + 1] = v * (1.0 - p);
            }
            filled *= 2;
        }
        for (std::size_t w = 0; w < words; ++w) bucket[w] += expand[w];
    }

    double mass = 0.0;
    for (double v : bucket) mass += v;
    const double correction = std::fabs(mass / denom - 1.0);
    if (!(correction <= 1e-8)) {
        char msg[120];
        std::snprintf(msg, sizeof(msg),
                      "marginal_quadrature: renormalization correction %.3g above 1e-8",
                      correction);
        throw NumericalError(msg);
    }
    for (double& v : bucket) v /= mass;
    return MarginalTable(k, std::move(bucket));
}

std::vector<std::vector<std::int8_t>> exact_sample(const ModelParams& params,
                                                   const FieldSample& field,
                                                   const QuadratureSpec& quad,
                                                   std::size_t n_samples, std::uint64_t seed) {
    check_problem(params, field, quad);
    if (n_samples == 0) throw ArgumentError("exact_sample: n_samples must be >= 1");

    const auto mu = measure_of(field);
    const double n = params.n_sites;
    const double R = quad.radius;

    // peak value for a stable density scale
    double shift = free_energy(mu, params.beta, 0.0);
    for (int i = 0; i <= 512; ++i) {
        const double y = -R + 2.0 * R * static_cast<double>(i) / 512;
        shift = std::max(shift, free_energy(mu, params.beta, y));
    }
    shift *= n;
    const auto dens = [&](double y) {
        return std::exp(n * free_energy(mu, params.beta, y) - shift);
    };

    // piecewise-linear density table, bisected until the trapezoid/Simpson
    // discrepancy (a proxy for the interpolation error) is 1e-6 of the mass
    struct Cell {
        double a, b, fa, fb, err;
    };
    const auto measure_cell = [&](Cell& c) {
        const double m = 0.5 * (c.a + c.b);
        const double fm = dens(m);
        const double trap = 0.5 * (c.fa + c.fb) * (c.b - c.a);
        const double simp = (c.fa + 4.0 * fm + c.fb) * (c.b - c.a) / 6.0;
        c.err = std::fabs(simp - trap);
    };

    std::vector<Cell> cells;
    const int initial = 512;
    const auto d1 = [&](double y) { return free_energy_deriv(mu, params.beta, y, 1); };
    const auto d2 = [&](double y) { return free_energy_deriv(mu, params.beta, y, 2); };
    std::vector<double> bounds;
    for (int i = 0; i <= initial; ++i)
        bounds.push_back(-R + 2.0 * R * static_cast<double>(i) / initial);
    for (double peak : local_maxima(d1, d2, -R, R, std::min(1e-2, R / 1024.0), 1e-6))
        bounds.push_back(peak);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [&](double u, double v) { return v - u < 1e-12 * R; }),
                 bounds.end());
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        Cell c{bounds[i], bounds[i + 1], dens(bounds[i]), dens(bounds[i + 1]), 0.0};
        measure_cell(c);
        cells.push_back(c);
    }

    for (int round = 0; round < 40; ++round) {
        double mass = 0.0, err = 0.0;
        for (const auto& c : cells) {
            mass += 0.5 * (c.fa + c.fb) * (c.b - c.a);
            err += c.err;
        }
        if (err <= 1e-6 * mass || cells.size() > (std::size_t{1} << 21)) break;
        const double cut = 0.25e-6 * mass / static_cast<double>(cells.size());
        std::vector<Cell> next;
        next.reserve(cells.size() * 2);
        for (const auto& c : cells) {
            if (c.err <= cut) {
                next.push_back(c);
                continue;
            }
            const double m = 0.5 * (c.a + c.b);
            const double fm = dens(m);
            Cell l{c.a, m, c.fa, fm, 0.0}, r{m, c.b, fm, c.fb, 0.0};
            measure_cell(l);
            measure_cell(r);
            next.push_back(l);
            next.push_back(r);
        }
        cells = std::move(next);
    }

    std::vector<double> cum(cells.size() + 1, 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i)
        cum[i + 1] = cum[i] + 0.5 * (cells[i].fa + cells[i].fb) * (cells[i].b - cells[i].a);
    const double mass = cum.back();
    if (!(mass > 0.0)) throw NumericalError("exact_sample: zero density mass");

    std::mt19937_64 eng(seed);
    const double beta = params.beta;
    const double asq = std::sqrt(beta);
    std::vector<std::vector<std::int8_t>> out(n_samples);
    for (auto& conf : out) {
        // auxiliary coordinate
        const double target = uniform_unit(eng) * mass;
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        std::size_t ci = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
        ci = std::min(ci, cells.size() - 1);
        const Cell& c = cells[ci];
        const double rest = target - cum[ci];
        const double len = c.b - c.a;
        const double slope = (c.fb - c.fa) / len;
        double u;
        if (std::fabs(slope) * len < 1e-12 * (c.fa + c.fb)) {
            u = rest / std::max(0.5 * (c.fa + c.fb), 1e-300);
        } else {
            const double disc = c.fa * c.fa + 2.0 * slope * rest;
            u = (std::sqrt(std::max(disc, 0.0)) - c.fa) / slope;
        }
        const double y = c.a + std::clamp(u, 0.0, len);

        // spins given y
        conf.resize(field.values.size());
        for (std::size_t i = 0; i < field.values.size(); ++i) {
            const double t = asq * y + beta * field.values[i];
            const double p = 1.0 / (1.0 + std::exp(-2.0 * t));
            conf[i] = uniform_unit(eng) < p ? std::int8_t{1} : std::int8_t{-1};
        }
    }
    return out;
}

std::size_t select_j_index(const FieldSample& field, const FieldSpec& spec, double beta,
                           const LandscapeReport& report) {
    if (report.maxima.empty()) throw ArgumentError("select_j_index: empty landscape report");
    std::size_t best = 0;
    double best_val = fluctuation(field, spec, beta, report.maxima[0].location);
    for (std::size_t j = 1; j < report.maxima.size(); ++j) {
        const double v = fluctuation(field, spec, beta, report.maxima[j].location);
        if (v > best_val + 1e-14) {
            best = j;
            best_val = v;
        }
    }
    return best;
}

MarginalTable predicted_product(double beta, const LandscapeReport& report, std::size_t j,
                                std::span<const double> field_prefix) {
    if (j >= report.maxima.size()) throw ArgumentError("predicted_product: index out of range");
    return product_marginal(beta, report.maxima[j].location, field_prefix);
}

} // namespace rfcw
