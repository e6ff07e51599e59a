#include "rfcw/field.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

FieldSpec::FieldSpec(std::string name, std::vector<FieldAtom> support)
    : name_(std::move(name)), support_(std::move(support)) {
    if (support_.empty()) throw ArgumentError("field spec: empty support");
    double total = 0.0;
    for (const auto& a : support_) {
        if (!std::isfinite(a.value)) throw ArgumentError("field spec: non-finite value");
        if (!(a.prob > 0.0)) throw ArgumentError("field spec: probabilities must be > 0");
        total += a.prob;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw ArgumentError("field spec: probabilities must sum to 1 within 1e-12");
}

FieldSpec FieldSpec::dichotomous(double h) {
    if (h < 0.0) throw ArgumentError("dichotomous field: h must be >= 0");
    if (h == 0.0) return point_mass(0.0);
    return FieldSpec("dichotomous:" + format_value(h),
                     {{h, 0.5}, {-h, 0.5}});
}

FieldSpec FieldSpec::point_mass(double value) {
    return FieldSpec("point:" + format_value(value), {{value, 1.0}});
}

double FieldSpec::mean() const {
    double s = 0.0;
    for (const auto& a : support_) s += a.prob * a.value;
    return s;
}

double FieldSpec::abs_mean() const {
    double s = 0.0;
    for (const auto& a : support_) s += a.prob * std::fabs(a.value);
    return s;
}

double FieldSpec::second_moment() const {
    double s = 0.0;
    for (const auto& a : support_) s += a.prob * a.value * a.value;
    return s;
}

bool FieldSpec::contains(double value) const {
    for (const auto& a : support_)
        if (a.value == value) return true;
    return false;
}

FieldSample sample_field(const FieldSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ArgumentError("sample_field: n must be >= 1");
    std::mt19937_64 eng(seed);
    const auto& atoms = spec.support();
    FieldSample out;
    out.values.resize(n);
    out.seed = seed;
    out.spec_name = spec.name();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        double acc = 0.0;
        double v = atoms.back().value;
        for (const auto& a : atoms) {
            acc += a.prob;
            if (u < acc) { v = a.value; break; }
        }
        out.values[i] = v;
    }
    return out;
}

WeightedValues measure_of(const FieldSpec& spec) {
    WeightedValues m;
    m.values.reserve(spec.support().size());
    m.weights.reserve(spec.support().size());
    for (const auto& a : spec.support()) {
        m.values.push_back(a.value);
        m.weights.push_back(a.prob);
    }
    return m;
}

WeightedValues measure_of(const FieldSample& sample) {
    if (sample.values.empty()) throw ArgumentError("measure_of: empty sample");
    WeightedValues m;
    std::vector<std::size_t> counts;
    for (double v : sample.values) {
        bool found = false;
        for (std::size_t j = 0; j < m.values.size(); ++j) {
            if (m.values[j] == v) { ++counts[j]; found = true; break; }
        }
        if (!found) {
            m.values.push_back(v);
            counts.push_back(1);
        }
    }
    const double n = static_cast<double>(sample.values.size());
    m.weights.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        m.weights[j] = static_cast<double>(counts[j]) / n;
    return m;
}

} // namespace rfcw
