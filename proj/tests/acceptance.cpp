// Acceptance gate: closed-form anchors plus property-based statistical
// checks at desk scale.  Prints one [PASS]/[FAIL] line per criterion and
// exits nonzero if any failed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "rfcw/experiments.hpp"
#include "rfcw/marginals.hpp"
#include "rfcw/phase.hpp"

using namespace rfcw;

namespace {

int g_failures = 0;

void expect(bool ok, const char* fmt, ...) {
    if (ok) return;
    ++g_failures;
    std::printf("       ");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int before, const char* label) {
    std::printf("%s %s\n", g_failures == before ? "[PASS]" : "[FAIL]", label);
}

FieldSample fixed_sample(std::vector<double> values) {
    FieldSample s;
    s.values = std::move(values);
    s.spec_name = "fixed";
    return s;
}

double uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// frozen references: positive maximizer and log cosh variance at
// beta = 2.5, h = 0.25, and the tricritical field strength
constexpr double kY1 = 1.535847246242318;
constexpr double kVar = 0.3754305563242154;

void criterion1_oracle_equivalence() {
    const int before = g_failures;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 eng(4242);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(eng() % 13); // 2..14
        const int k = std::min(n, 1 + static_cast<int>(eng() % 3));
        const double beta = 0.2 + 2.8 * uniform(eng);
        const double hmag = uniform(eng);
        const ModelParams params{beta, n};
        const auto field = sample_field(FieldSpec::dichotomous(hmag),
                                        static_cast<std::size_t>(n),
                                        100 + static_cast<std::uint64_t>(rep));
        const auto quad = marginal_quadrature(params, field, k, default_quadrature(params, field));
        const auto brute = brute_force_marginal(params, field, k);
        worst = std::max(worst, tv_distance(quad, brute));
    }
    const double elapsed = seconds_since(t0);
    expect(worst <= 1e-9, "worst TV(quadrature, enumeration) = %.3g > 1e-9", worst);
    expect(elapsed <= 60.0, "runtime %.1f s > 60 s", elapsed);
    verdict(before, "criterion 1: quadrature matches enumeration on 50 random configs");
}

void criterion2_closed_forms() {
    const int before = g_failures;
    for (double beta : {0.5, 1.3, 2.7}) {
        for (double a : {0.0, 0.25, -0.6}) {
            const ModelParams params{beta, 1};
            const auto field = fixed_sample({a});
            auto quad = default_quadrature(params, field);
            quad.rel_tol = 1e-12;
            const auto table = marginal_quadrature(params, field, 1, quad);
            const double target = std::exp(beta * a) / (2.0 * std::cosh(beta * a));
            expect(std::fabs(table[0] - target) <= 1e-12,
                   "N=1 marginal off by %.3g at beta=%g a=%g", std::fabs(table[0] - target),
                   beta, a);
        }
        const ModelParams params{beta, 2};
        const auto field = fixed_sample({0.0, 0.0});
        const auto r = log_partition(params, field, default_quadrature(params, field));
        const double target = std::log(2.0 * std::exp(beta) + 2.0);
        expect(std::fabs(r.log_value - target) <= 1e-10,
               "log Z(N=2, h=0) off by %.3g at beta=%g", std::fabs(r.log_value - target), beta);
    }
    verdict(before, "criterion 2: single-site and two-site closed forms");
}

void criterion3_phase_anchors() {
    const int before = g_failures;
    expect(std::fabs(second_order_beta(0.0) - 1.0) <= 1e-9, "second_order_beta(0) != 1");
    const auto tri = tricritical_point();
    expect(std::fabs(tri.h_field - 0.4389850) <= 1e-6, "tricritical h = %.8f", tri.h_field);
    expect(std::fabs(tri.h_field - (2.0 / 3.0) * std::acosh(std::sqrt(1.5))) <= 1e-14,
           "tricritical h does not match the closed form");
    expect(std::fabs(tri.beta_crit - 1.5) <= 1e-9, "tricritical beta = %.12f", tri.beta_crit);
    const auto spec = FieldSpec::dichotomous(tri.h_field);
    const double g2 = free_energy_deriv(spec, tri.beta_crit, 0.0, 2);
    const double g4 = free_energy_deriv(spec, tri.beta_crit, 0.0, 4);
    const double g6 = free_energy_deriv(spec, tri.beta_crit, 0.0, 6);
    expect(std::fabs(g2) <= 1e-8, "G''(0) = %.3g at the tricritical point", g2);
    expect(std::fabs(g4) <= 1e-8, "G''''(0) = %.3g at the tricritical point", g4);
    expect(g6 < 0.0, "G^(6)(0) = %.3g not negative", g6);
    verdict(before, "criterion 3: second-order line start and tricritical anchors");
}

void criterion4_degeneracy() {
    const int before = g_failures;
    const auto rec = classify_maximum(FieldSpec::dichotomous(0.0), 1.0, 0.0);
    expect(rec.degeneracy_n == 2, "degeneracy n = %d, want 2", rec.degeneracy_n);
    expect(std::fabs(rec.leading_derivative + 2.0) <= 1e-8, "leading derivative %.10f",
           rec.leading_derivative);
    verdict(before, "criterion 4: the h=0, beta=1 maximum is 2-degenerate with G''''=-2");
}

void criterion5_unique_maximum_decay() {
    const int before = g_failures;
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig config{FieldSpec::dichotomous(0.25), 0.8, {250, 1000, 4000}, KRule::fixed(3),
                            1, 20240814, std::nullopt};
    const auto rows = chaos_convergence_scan(config);
    expect(rows.size() == 3, "expected 3 rows");
    expect(rows[1].kl < rows[0].kl && rows[2].kl < rows[1].kl,
           "KL not decreasing: %.3g, %.3g, %.3g", rows[0].kl, rows[1].kl, rows[2].kl);
    expect(rows[2].kl <= 5e-3, "KL(N=4000) = %.3g > 5e-3", rows[2].kl);
    const double elapsed = seconds_since(t0);
    expect(elapsed <= 120.0, "runtime %.1f s > 120 s", elapsed);
    verdict(before, "criterion 5: KL decay with a unique simple maximum (h=0.25, beta=0.8)");
}

void criterion6_degenerate_decay() {
    const int before = g_failures;
    ExperimentConfig config{FieldSpec::dichotomous(0.0), 1.0, {250, 4000}, KRule::fixed(2), 1, 1,
                            std::nullopt};
    const auto rows = chaos_convergence_scan(config);
    expect(rows.size() == 2, "expected 2 rows");
    expect(rows[1].kl < rows[0].kl, "KL(N=4000)=%.3g not below KL(N=250)=%.3g", rows[1].kl,
           rows[0].kl);
    verdict(before, "criterion 6: KL decay at the 2-degenerate critical point (h=0, beta=1)");
}

void criterion7_random_index() {
    const int before = g_failures;
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig config{FieldSpec::dichotomous(0.25), 2.5, {4000}, KRule::fixed(2), 100, 777,
                            std::nullopt};
    const auto report = j_index_statistics(config);
    expect(report.rows.size() == 100, "expected 100 rows");
    expect(report.counts.size() == 2, "expected 2 maxima");

    std::vector<double> tvs;
    int other_far = 0;
    for (const auto& r : report.rows) {
        tvs.push_back(r.tv);
        if (r.tv_other > 0.1) ++other_far;
    }
    std::nth_element(tvs.begin(), tvs.begin() + 50, tvs.end());
    const double median = tvs[50];
    expect(median <= 0.05, "median TV = %.4f > 0.05", median);
    for (std::size_t i = 0; i < report.counts.size(); ++i) {
        const double freq = static_cast<double>(report.counts[i]) / 100.0;
        expect(freq >= 0.4 && freq <= 0.6, "J frequency[%zu] = %.2f outside [0.4, 0.6]", i, freq);
    }
    expect(other_far >= 90, "TV against the mirrored index > 0.1 in only %d of 100 replicas",
           other_far);
    const double elapsed = seconds_since(t0);
    expect(elapsed <= 600.0, "runtime %.1f s > 600 s", elapsed);
    verdict(before, "criterion 7: random index selection at h=0.25, beta=2.5, N=4000");
}

void criterion8_sampler() {
    const int before = g_failures;
    const ModelParams params{0.8, 200};
    const auto field = sample_field(FieldSpec::dichotomous(0.25), 200, 4);
    const auto quad = default_quadrature(params, field);
    const std::size_t n_draw = 100000;
    const auto draws = exact_sample(params, field, quad, n_draw, 5);
    const auto joint = marginal_quadrature(params, field, 5, quad);

    for (int site = 0; site < 5; ++site) {
        double p = 0.0;
        for (std::uint32_t w = 0; w < joint.size(); ++w)
            if (((w >> (4 - site)) & 1u) == 0u) p += joint[w];
        double freq = 0.0;
        for (const auto& config : draws)
            if (config[static_cast<std::size_t>(site)] == 1) freq += 1.0;
        freq /= static_cast<double>(n_draw);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_draw));
        expect(std::fabs(freq - p) <= 4.0 * se,
               "site %d: |freq - p| = %.5f > 4 se = %.5f (p = %.5f)", site + 1,
               std::fabs(freq - p), 4.0 * se, p);
    }
    verdict(before, "criterion 8: exact sampler matches site marginals at N=200");
}

void criterion9_clt() {
    const int before = g_failures;
    const auto diag = clt_diagnostic(FieldSpec::dichotomous(0.25), 2.5, kY1, 2000, 2000, 31);
    expect(std::fabs(diag.analytic_variance - kVar) <= 1e-12, "analytic variance %.15f",
           diag.analytic_variance);
    const double rel = std::fabs(diag.empirical_variance - diag.analytic_variance) /
                       diag.analytic_variance;
    expect(rel <= 0.10, "empirical variance %.5f vs analytic %.5f (rel %.3f)",
           diag.empirical_variance, diag.analytic_variance, rel);
    verdict(before, "criterion 9: sqrt(N) fluctuation variance at the positive maximizer");
}

void criterion10_invariants() {
    const int before = g_failures;
    std::mt19937_64 eng(1001);
    for (int rep = 0; rep < 200; ++rep) {
        const double beta = 0.2 + 2.8 * uniform(eng);
        FieldSpec spec = FieldSpec::dichotomous(uniform(eng));
        if (rep % 3 == 0) {
            // asymmetric three-atom law
            const double v1 = -1.0 + 2.0 * uniform(eng);
            const double v2 = -1.0 + 2.0 * uniform(eng);
            const double v3 = -1.0 + 2.0 * uniform(eng);
            double p1 = 0.05 + uniform(eng), p2 = 0.05 + uniform(eng), p3 = 0.05 + uniform(eng);
            const double total = p1 + p2 + p3;
            p1 /= total;
            p2 /= total;
            p3 = 1.0 - p1 - p2;
            spec = FieldSpec("case3", {{v1, p1}, {v2, p2}, {v3, p3}});
        }
        const bool small = (rep % 2) == 0;
        const int n = small ? 3 + static_cast<int>(eng() % 10)
                            : 20 + static_cast<int>(eng() % 60);
        const int k = std::min(n, 2 + static_cast<int>(eng() % 2)); // 2 or 3
        const ModelParams params{beta, n};
        const auto field = sample_field(spec, static_cast<std::size_t>(n),
                                        3000 + static_cast<std::uint64_t>(rep));
        const auto quad = default_quadrature(params, field);
        const auto table = small ? brute_force_marginal(params, field, k)
                                 : marginal_quadrature(params, field, k, quad);

        // normalization
        expect(table.is_distribution(1e-10), "case %d: table not normalized", rep);

        // Pinsker against the predicted product at the selected maximizer
        const auto report = find_global_maxima(spec, beta);
        const auto j = select_j_index(field, spec, beta, report);
        const std::span<const double> prefix(field.values.data(), static_cast<std::size_t>(k));
        const auto rho = predicted_product(beta, report, j, prefix);
        const double kl = kl_divergence(table, rho);
        const double tv = tv_distance(table, rho);
        expect(tv <= std::sqrt(0.5 * kl) + 1e-12, "case %d: Pinsker violated", rep);

        // tower property
        const auto coarse = small ? brute_force_marginal(params, field, k - 1)
                                  : marginal_quadrature(params, field, k - 1, quad);
        const auto reduced = table.marginalize_last();
        double tower_gap = 0.0;
        for (std::uint32_t i = 0; i < coarse.size(); ++i)
            tower_gap = std::max(tower_gap, std::fabs(reduced[i] - coarse[i]));
        expect(tower_gap <= 1e-12, "case %d: tower gap %.3g", rep, tower_gap);

        // global spin flip against field negation
        FieldSample neg = field;
        for (double& v : neg.values) v = -v;
        const auto flipped = small
                                 ? brute_force_marginal(params, neg, k)
                                 : marginal_quadrature(params, neg, k,
                                                       default_quadrature(params, neg));
        const double cov_gap = tv_distance(flipped, table.flip_all_spins());
        expect(cov_gap <= 1e-9, "case %d: spin flip covariance gap %.3g", rep, cov_gap);

        // closed-form derivative of each order against a 5-point first
        // derivative of the analytic order below it
        const double y = -2.0 + 4.0 * uniform(eng);
        const int order = 1 + static_cast<int>(eng() % 4);
        const double h = 0.004;
        const auto lower = [&](double t) {
            return order == 1 ? free_energy(spec, beta, t)
                              : free_energy_deriv(spec, beta, t, order - 1);
        };
        const double approx =
            (-lower(y + 2 * h) + 8 * lower(y + h) - 8 * lower(y - h) + lower(y - 2 * h)) /
            (12 * h);
        const double exact = free_energy_deriv(spec, beta, y, order);
        const double scale = std::max(1.0, std::fabs(exact));
        expect(std::fabs(exact - approx) / scale <= 1e-6,
               "case %d: order-%d derivative off by %.3g", rep, order,
               std::fabs(exact - approx) / scale);
    }
    verdict(before, "criterion 10: invariant battery on 200 randomized cases");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1_oracle_equivalence();
    criterion2_closed_forms();
    criterion3_phase_anchors();
    criterion4_degeneracy();
    criterion5_unique_maximum_decay();
    criterion6_degenerate_decay();
    criterion7_random_index();
    criterion8_sampler();
    criterion9_clt();
    criterion10_invariants();
    std::printf("%d failure(s), %.1f s total\n", g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
