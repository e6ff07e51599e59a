#include "rfcw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rfcw/errors.hpp"
#include "rfcw/landscape.hpp"

namespace rfcw {

namespace {

constexpr int kGlOrder = 15;
constexpr std::size_t kPanelCap = 65536;

struct GlRule {
    std::array<double, kGlOrder> x, w;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre polynomial.
const GlRule& gl15() {
    static const GlRule rule = [] {
        GlRule r;
        const int n = kGlOrder;
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double dz = p1 / pp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            r.x[static_cast<std::size_t>(i)] = -z;
            r.x[static_cast<std::size_t>(n - 1 - i)] = z;
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
            r.w[static_cast<std::size_t>(n - 1 - i)] = r.w[static_cast<std::size_t>(i)];
        }
        return r;
    }();
    return rule;
}

double logsumexp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

struct Panel {
    double a = 0.0, b = 0.0;
    double log_single = 0.0; // one 15-node rule
    double log_pair = 0.0;   // two half-width rules
    double log_left = 0.0, log_right = 0.0;
    std::vector<double> ys, lms; // the 30 pair nodes
};

} // namespace

void validate(const QuadratureSpec& spec) {
    if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
        throw ArgumentError("quadrature: radius must be finite and > 0");
    if (!(spec.rel_tol > 0.0) || spec.rel_tol > 1e-6)
        throw ArgumentError("quadrature: rel_tol must lie in (0, 1e-6]");
    if (spec.max_refinements < 1 || spec.max_refinements > 30)
        throw ArgumentError("quadrature: max_refinements must lie in [1, 30]");
}

QuadratureSpec default_quadrature(const ModelParams& params, const FieldSample& field) {
    validate(params);
    const double r0 = tail_radius(field, params.beta);
    const auto mu = measure_of(field);
    double gmax = free_energy(mu, params.beta, 0.0);
    const int scan = 512;
    for (int i = 0; i <= scan; ++i) {
        const double y = -r0 + 2.0 * r0 * static_cast<double>(i) / scan;
        gmax = std::max(gmax, free_energy(mu, params.beta, y));
    }
    QuadratureSpec spec;
    // beyond r0 the surface sits under -y^2/4, so this radius buries the
    // truncated tail about e^{-70} below the peak even at tiny N
    spec.radius = std::max(r0, 2.0 * std::sqrt(gmax + 70.0 / params.n_sites));
    return spec;
}

DensityGrid build_density_grid(const WeightedValues& mu, double beta, double scale,
                               const QuadratureSpec& spec) {
    validate(spec);
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ArgumentError("build_density_grid: scale must be finite and > 0");
    const double R = spec.radius;

    const auto f = [&](double y) { return scale * free_energy(mu, beta, y); };
    const auto& rule = gl15();

    const auto eval15 = [&](double a, double b, std::vector<double>* ys,
                            std::vector<double>* lms) {
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        std::vector<double> vals(kGlOrder);
        for (int i = 0; i < kGlOrder; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const double y = c + hw * rule.x[ui];
            const double lm = f(y) + std::log(rule.w[ui] * hw);
            vals[ui] = lm;
            if (ys) { ys->push_back(y); lms->push_back(lm); }
        }
        return logsumexp(vals);
    };

    const auto eval_pair = [&](Panel& p) {
        p.ys.clear();
        p.lms.clear();
        p.ys.reserve(2 * kGlOrder);
        p.lms.reserve(2 * kGlOrder);
        const double c = 0.5 * (p.a + p.b);
        p.log_left = eval15(p.a, c, &p.ys, &p.lms);
        p.log_right = eval15(c, p.b, &p.ys, &p.lms);
        p.log_pair = logsumexp({p.log_left, p.log_right});
    };

    // boundaries: uniform coverage plus every local maximum of the exponent
    std::vector<double> bounds;
    const int uniform = 64;
    for (int i = 0; i <= uniform; ++i)
        bounds.push_back(-R + 2.0 * R * static_cast<double>(i) / uniform);
    const auto d1 = [&](double y) { return free_energy_deriv(mu, beta, y, 1); };
    const auto d2 = [&](double y) { return free_energy_deriv(mu, beta, y, 2); };
    for (double peak : local_maxima(d1, d2, -R, R, std::min(1e-2, R / 1024.0), 1e-6))
        bounds.push_back(peak);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [&](double u, double v) { return v - u < 1e-12 * R; }),
                 bounds.end());

    std::vector<Panel> panels;
    panels.reserve(256);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        Panel p;
        p.a = bounds[i];
        p.b = bounds[i + 1];
        p.log_single = eval15(p.a, p.b, nullptr, nullptr);
        eval_pair(p);
        panels.push_back(std::move(p));
    }

    double est = 0.0;
    double total = 0.0;
    double total_prev = std::numeric_limits<double>::quiet_NaN();
    int sweep = 0;
    bool converged = false;
    for (; sweep <= spec.max_refinements; ++sweep) {
        std::vector<double> lp(panels.size());
        for (std::size_t i = 0; i < panels.size(); ++i) lp[i] = panels[i].log_pair;
        total = logsumexp(lp);
        // per-panel share of the budget, so the sum of accepted discrepancies
        // stays below rel_tol regardless of the panel count
        const double theta = spec.rel_tol / (4.0 * static_cast<double>(panels.size()));
        est = 0.0;
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            const Panel& p = panels[i];
            const double e = std::fabs(std::exp(p.log_single - total) -
                                       std::exp(p.log_pair - total));
            est += e;
            const double minw = 1e-13 * std::max(1.0, std::fabs(p.a) + std::fabs(p.b));
            if (e > theta && p.b - p.a > minw) bad.push_back(i);
        }
        const bool settled = !std::isnan(total_prev) &&
                             std::fabs(total - total_prev) <= spec.rel_tol;
        if (bad.empty() && settled && est <= spec.rel_tol) {
            converged = true;
            break;
        }
        if (sweep == spec.max_refinements || panels.size() + bad.size() > kPanelCap) break;
        total_prev = total;
        for (std::size_t i : bad) {
            Panel left, right;
            const Panel& p = panels[i];
            const double c = 0.5 * (p.a + p.b);
            left.a = p.a; left.b = c; left.log_single = p.log_left;
            right.a = c; right.b = p.b; right.log_single = p.log_right;
            eval_pair(left);
            eval_pair(right);
            panels[i] = std::move(left);
            panels.push_back(std::move(right));
        }
        std::sort(panels.begin(), panels.end(),
                  [](const Panel& u, const Panel& v) { return u.a < v.a; });
    }
    if (!converged) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "quadrature: refinement budget exhausted, achieved %.3g (target %.3g)",
                      est, spec.rel_tol);
        throw NumericalError(msg);
    }

    DensityGrid grid;
    grid.radius = R;
    grid.refinements = sweep;
    grid.est_error = est;
    std::size_t count = 0;
    for (const auto& p : panels) count += p.ys.size();
    grid.nodes.reserve(count);
    grid.log_mass.reserve(count);
    for (const auto& p : panels) {
        grid.nodes.insert(grid.nodes.end(), p.ys.begin(), p.ys.end());
        grid.log_mass.insert(grid.log_mass.end(), p.lms.begin(), p.lms.end());
    }
    grid.log_total = logsumexp(grid.log_mass);
    return grid;
}

} // namespace rfcw
