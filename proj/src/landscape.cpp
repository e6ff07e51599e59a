#include "rfcw/landscape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

constexpr int kMaxDerivOrder = 8;

// log cosh without overflow: |x| + log1p(e^{-2|x|}) - log 2.
double log_cosh(double x) {
    const double a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.693147180559945309417232121458176568;
}

// d^m/du^m log cosh u = P_m(tanh u); P_1 = t, P_{m+1} = P_m'(t) (1 - t^2).
// Coefficients are small integers; built once, stored ascending in powers.
const std::array<std::vector<double>, kMaxDerivOrder + 1>& tanh_polys() {
    static const auto table = [] {
        std::array<std::vector<double>, kMaxDerivOrder + 1> p;
        p[1] = {0.0, 1.0};
        for (int m = 1; m < kMaxDerivOrder; ++m) {
            std::vector<double> d(p[m].size() - 1); // d/dt
            for (std::size_t i = 1; i < p[m].size(); ++i)
                d[i - 1] = p[m][i] * static_cast<double>(i);
            std::vector<double> next(d.size() + 2, 0.0); // * (1 - t^2)
            for (std::size_t i = 0; i < d.size(); ++i) {
                next[i] += d[i];
                next[i + 2] -= d[i];
            }
            p[m + 1] = std::move(next);
        }
        // P_2(0) = 1 and P_4(0) = -2 pin the recursion
        if (p[2][0] != 1.0 || p[4][0] != -2.0)
            throw NumericalError("tanh polynomial table corrupt");
        return p;
    }();
    return table;
}

double poly_eval(const std::vector<double>& coeff, double t) {
    double v = 0.0;
    for (std::size_t i = coeff.size(); i-- > 0;) v = v * t + coeff[i];
    return v;
}

void check_measure(const WeightedValues& mu) {
    if (mu.values.empty() || mu.values.size() != mu.weights.size())
        throw ArgumentError("weighted values: empty or mismatched");
}

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ArgumentError("beta must be finite and > 0");
}

double tail_radius_from_abs_mean(double beta, double abs_mean) {
    const double a = std::sqrt(beta);
    return 1.0 + 2.0 * a + 2.0 * std::sqrt(beta + std::log(2.0) + beta * abs_mean);
}

} // namespace

double free_energy(const WeightedValues& mu, double beta, double y) {
    check_measure(mu);
    check_beta(beta);
    const double a = std::sqrt(beta);
    double s = 0.0;
    for (std::size_t j = 0; j < mu.values.size(); ++j)
        s += mu.weights[j] * log_cosh(a * y + beta * mu.values[j]);
    return -0.5 * y * y + s;
}

double free_energy_deriv(const WeightedValues& mu, double beta, double y, int order) {
    check_measure(mu);
    check_beta(beta);
    if (order < 1 || order > kMaxDerivOrder)
        throw ArgumentError("free_energy_deriv: order must be in [1, 8]");
    const double a = std::sqrt(beta);
    const auto& poly = tanh_polys()[static_cast<std::size_t>(order)];
    double s = 0.0;
    for (std::size_t j = 0; j < mu.values.size(); ++j)
        s += mu.weights[j] * poly_eval(poly, std::tanh(a * y + beta * mu.values[j]));
    s *= std::pow(a, order);
    if (order == 1) s -= y;
    if (order == 2) s -= 1.0;
    return s;
}

double free_energy(const FieldSpec& spec, double beta, double y) {
    return free_energy(measure_of(spec), beta, y);
}

double free_energy_deriv(const FieldSpec& spec, double beta, double y, int order) {
    return free_energy_deriv(measure_of(spec), beta, y, order);
}

double empirical_free_energy(const FieldSample& sample, double beta, double y) {
    return free_energy(measure_of(sample), beta, y);
}

double empirical_free_energy_deriv(const FieldSample& sample, double beta, double y, int order) {
    return free_energy_deriv(measure_of(sample), beta, y, order);
}

double fluctuation(const FieldSample& sample, const FieldSpec& spec, double beta, double y,
                   int order) {
    if (order == 0)
        return empirical_free_energy(sample, beta, y) - free_energy(spec, beta, y);
    return empirical_free_energy_deriv(sample, beta, y, order) -
           free_energy_deriv(spec, beta, y, order);
}

double tail_radius(const FieldSpec& spec, double beta) {
    check_beta(beta);
    return tail_radius_from_abs_mean(beta, spec.abs_mean());
}

double tail_radius(const FieldSample& sample, double beta) {
    check_beta(beta);
    if (sample.values.empty()) throw ArgumentError("tail_radius: empty sample");
    double m = 0.0;
    for (double v : sample.values) m += std::fabs(v);
    return tail_radius_from_abs_mean(beta, m / static_cast<double>(sample.values.size()));
}

std::vector<double> local_maxima(const std::function<double(double)>& deriv,
                                 const std::function<double(double)>& second_deriv,
                                 double lo, double hi, double step, double tol) {
    if (!(hi > lo) || !(step > 0.0)) throw ArgumentError("local_maxima: bad scan range");

    struct Bracket {
        double a, b;
    };
    std::vector<Bracket> brackets;
    std::vector<double> roots; // exact grid hits

    const auto n_steps = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    double prev_y = lo;
    double prev_d = deriv(lo);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double y = (i == n_steps) ? hi : lo + static_cast<double>(i) * step;
        const double d = deriv(y);
        if (d == 0.0) continue; // bracket spans the flat point via neighbours
        if (prev_d == 0.0) {
            if (d < 0.0 && deriv(prev_y - 0.5 * step) > 0.0) roots.push_back(prev_y);
        } else if (prev_d > 0.0 && d < 0.0) {
            brackets.push_back({prev_y, y});
        }
        prev_y = y;
        prev_d = d;
    }

    for (const auto& br : brackets) {
        double a = br.a, b = br.b;
        double x = 0.5 * (a + b);
        bool done = false;
        for (int it = 0; it < 100; ++it) {
            const double dx = deriv(x);
            if (dx == 0.0) { done = true; break; }
            if (dx > 0.0) a = x; else b = x;
            const double width = b - a;
            if (width <= 1e-14 * std::max(1.0, std::fabs(x))) {
                x = 0.5 * (a + b);
                done = true;
                break;
            }
            // Newton step when it stays inside the bracket and moves
            // decisively; plain bisection otherwise
            double next = 0.5 * (a + b);
            const double ddx = second_deriv(x);
            if (ddx < 0.0) {
                const double newton = x - dx / ddx;
                if (newton > a && newton < b && std::fabs(newton - x) > 0.25 * width)
                    next = newton;
            }
            x = next;
        }
        if (!done) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "local_maxima: no convergence after 100 iterations in [%.17g, %.17g]",
                          br.a, br.b);
            throw NumericalError(msg);
        }
        if (std::fabs(deriv(x)) > tol) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "local_maxima: residual derivative %.3g above tolerance at %.17g",
                          deriv(x), x);
            throw NumericalError(msg);
        }
        roots.push_back(x);
    }

    std::sort(roots.begin(), roots.end());
    return roots;
}

DegeneracyRecord classify_maximum(const FieldSpec& spec, double beta, double y0, double tol_deg) {
    check_beta(beta);
    if (!(tol_deg > 0.0)) throw ArgumentError("classify_maximum: tol_deg must be > 0");
    const auto mu = measure_of(spec);
    if (std::fabs(free_energy_deriv(mu, beta, y0, 1)) > 1e-10)
        throw ArgumentError("classify_maximum: y0 is not a critical point");
    for (int n = 1; n <= 4; ++n) {
        bool flat = true;
        for (int m = 2; m < 2 * n && flat; ++m)
            flat = std::fabs(free_energy_deriv(mu, beta, y0, m)) <= tol_deg;
        if (!flat) continue;
        const double lead = free_energy_deriv(mu, beta, y0, 2 * n);
        if (lead < -tol_deg) return {n, lead};
    }
    throw ClassificationError("classify_maximum: no admissible degeneracy n <= 4");
}

LandscapeReport find_global_maxima(const FieldSpec& spec, double beta, double tol) {
    check_beta(beta);
    if (!(tol > 0.0)) throw ArgumentError("find_global_maxima: tol must be > 0");
    const auto mu = measure_of(spec);
    const double radius = tail_radius(spec, beta);
    const double step = std::min(1e-3 * radius, 1e-2);

    const auto d1 = [&](double y) { return free_energy_deriv(mu, beta, y, 1); };
    const auto d2 = [&](double y) { return free_energy_deriv(mu, beta, y, 2); };
    auto locs = local_maxima(d1, d2, -radius, radius, step, tol);

    std::vector<double> uniq;
    for (double y : locs)
        if (uniq.empty() || y - uniq.back() > 1e-8) uniq.push_back(y);

    LandscapeReport report;
    report.tail_radius = radius;
    report.scan_tolerance = tol;
    if (uniq.empty()) throw NumericalError("find_global_maxima: no maxima located");

    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> values(uniq.size());
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        values[i] = free_energy(mu, beta, uniq[i]);
        best = std::max(best, values[i]);
    }
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        if (values[i] < best - 1e-10) continue;
        const auto cls = classify_maximum(spec, beta, uniq[i]);
        MaximumRecord rec;
        rec.location = uniq[i];
        rec.value = values[i];
        rec.degeneracy_n = cls.degeneracy_n;
        rec.leading_derivative = cls.leading_derivative;
        rec.curvature = cls.degeneracy_n == 1 ? -free_energy_deriv(mu, beta, uniq[i], 2) : 0.0;
        report.maxima.push_back(rec);
    }
    return report;
}

} // namespace rfcw
