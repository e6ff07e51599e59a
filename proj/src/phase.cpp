#include "rfcw/phase.hpp"

#include <cmath>

#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

double h_tri() {
    return (2.0 / 3.0) * std::acosh(std::sqrt(1.5));
}

// beta sech^2(beta h) - 1
double curvature_gap(double beta, double h) {
    const double c = std::cosh(beta * h);
    return beta / (c * c) - 1.0;
}

// max_{y >= delta} G(y) - G(0) for the dichotomous field, the tie function
// of the first-order segment
double value_gap(double beta, double h) {
    const FieldSpec spec = FieldSpec::dichotomous(h);
    const auto mu = measure_of(spec);
    const double R = tail_radius(spec, beta);
    const double delta = 1e-4;
    const auto d1 = [&](double y) { return free_energy_deriv(mu, beta, y, 1); };
    const auto d2 = [&](double y) { return free_energy_deriv(mu, beta, y, 2); };
    double best = free_energy(mu, beta, delta);
    // near the tricritical corner the off-center bump sits at y ~ sqrt(h - h_tri)
    // and would slip between coarse grid points, so scan the origin region finely
    for (double y : local_maxima(d1, d2, delta, 0.25, 2e-5, 1e-9))
        best = std::max(best, free_energy(mu, beta, y));
    for (double y : local_maxima(d1, d2, 0.25, R, std::min(1e-2, R / 2048.0), 1e-9))
        best = std::max(best, free_energy(mu, beta, y));
    return best - free_energy(mu, beta, 0.0);
}

} // namespace

const char* to_string(PhaseCase c) {
    switch (c) {
        case PhaseCase::ParaUnique: return "ParaUnique";
        case PhaseCase::SecondOrderCritical: return "SecondOrderCritical";
        case PhaseCase::FirstOrderTriple: return "FirstOrderTriple";
        case PhaseCase::FerroPair: return "FerroPair";
        case PhaseCase::HighFieldUnique: return "HighFieldUnique";
    }
    return "?";
}

double second_order_beta(double h_field) {
    if (!(h_field >= 0.0)) throw ArgumentError("second_order_beta: h must be >= 0");
    if (h_field > h_tri() + 1e-12)
        throw DomainError("second_order_beta: h beyond the tricritical point");
    double lo = 1.0;
    double glo = curvature_gap(lo, h_field);
    if (glo == 0.0) return lo; // h = 0
    double hi = 0.0;
    bool bracketed = false;
    for (double b = 1.01; b <= 10.0 + 1e-9; b += 0.01) {
        const double g = curvature_gap(b, h_field);
        if (g >= 0.0) {
            hi = b;
            bracketed = true;
            break;
        }
        lo = b;
        glo = g;
    }
    if (!bracketed) throw DomainError("second_order_beta: no root in [1, 10]");
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (curvature_gap(mid, h_field) >= 0.0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double first_order_beta(double h_field) {
    const double ht = h_tri();
    if (!(h_field > ht) || !(h_field < 0.5))
        throw DomainError("first_order_beta: h must lie in (h_tri, 1/2)");
    double lo = 1.5, hi = 200.0;
    if (!(value_gap(lo, h_field) < 0.0) || !(value_gap(hi, h_field) > 0.0))
        throw DomainError("first_order_beta: gap does not bracket a sign change");
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        if (value_gap(mid, h_field) > 0.0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

CriticalPoint tricritical_point() {
    CriticalPoint p;
    p.h_field = h_tri();
    p.beta_crit = second_order_beta(p.h_field);
    p.order = CriticalPoint::Order::second;
    return p;
}

double critical_beta(double h_field) {
    if (!(h_field >= 0.0) || !(h_field < 0.5))
        throw DomainError("critical_beta: h must lie in [0, 1/2)");
    // the corner itself belongs to the second-order segment; a strict split
    // would hand an h one rounding error above h_tri to the first-order
    // solver, whose bracket degenerates there
    return h_field <= h_tri() + 1e-12 ? second_order_beta(h_field)
                                      : first_order_beta(h_field);
}

RegimeLabel classify_regime(double beta, double h_field) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ArgumentError("classify_regime: beta must be finite and > 0");
    if (!(h_field >= 0.0)) throw ArgumentError("classify_regime: h must be >= 0");

    const FieldSpec spec = FieldSpec::dichotomous(h_field);
    RegimeLabel label;
    const auto fill = [&](const LandscapeReport& report) {
        label.n_maxima = static_cast<int>(report.maxima.size());
        label.degeneracy_n = 1;
        for (const auto& m : report.maxima)
            label.degeneracy_n = std::max(label.degeneracy_n, m.degeneracy_n);
    };

    if (h_field >= 0.5) {
        fill(find_global_maxima(spec, beta));
        label.phase = PhaseCase::HighFieldUnique;
        return label;
    }
    const double f = critical_beta(h_field);
    if (std::fabs(beta - f) <= 1e-9) {
        // within rounding of the line the raw landscape is ill-conditioned
        // (the flat top can split into a spurious micro-pair), so classify
        // the on-line model itself
        if (h_field <= h_tri() + 1e-12) {
            label.phase = PhaseCase::SecondOrderCritical;
            label.n_maxima = 1;
            label.degeneracy_n = classify_maximum(spec, f, 0.0).degeneracy_n;
        } else {
            label.phase = PhaseCase::FirstOrderTriple;
            fill(find_global_maxima(spec, f));
        }
        return label;
    }
    fill(find_global_maxima(spec, beta));
    label.phase = beta < f ? PhaseCase::ParaUnique : PhaseCase::FerroPair;
    return label;
}

std::vector<CriticalPoint> trace_phase_line(double h_max, int steps) {
    if (!(h_max > 0.0) || !(h_max < 0.5))
        throw ArgumentError("trace_phase_line: h_max must lie in (0, 1/2)");
    if (steps < 1) throw ArgumentError("trace_phase_line: steps must be >= 1");
    const double ht = h_tri();
    std::vector<CriticalPoint> line;
    line.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double h = h_max * static_cast<double>(i) / steps;
        CriticalPoint p;
        p.h_field = h;
        if (h <= ht) {
            p.beta_crit = second_order_beta(h);
            p.order = CriticalPoint::Order::second;
        } else {
            p.beta_crit = first_order_beta(h);
            p.order = CriticalPoint::Order::first;
        }
        line.push_back(p);
    }
    return line;
}

} // namespace rfcw
