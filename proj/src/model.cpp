#include "rfcw/model.hpp"

#include <bit>
#include <cmath>

#include "rfcw/errors.hpp"

namespace rfcw {

void validate(const ModelParams& params) {
    if (!(params.beta > 0.0) || !std::isfinite(params.beta))
        throw ArgumentError("model params: beta must be finite and > 0");
    if (params.n_sites < 1) throw ArgumentError("model params: n_sites must be >= 1");
}

double hamiltonian(std::span<const std::int8_t> sigma, std::span<const double> field) {
    if (sigma.empty() || sigma.size() != field.size())
        throw ArgumentError("hamiltonian: sigma and field must have equal nonzero length");
    double s = 0.0, f = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] != 1 && sigma[i] != -1)
            throw ArgumentError("hamiltonian: spins must be +-1");
        s += sigma[i];
        f += field[i] * sigma[i];
    }
    return -s * s / (2.0 * static_cast<double>(sigma.size())) - f;
}

MarginalTable brute_force_marginal(const ModelParams& params, const FieldSample& field, int k) {
    validate(params);
    const int n = params.n_sites;
    if (static_cast<std::size_t>(n) != field.values.size())
        throw ArgumentError("brute_force_marginal: field length must equal n_sites");
    if (n > kEnumerationMaxSites)
        throw CapacityError("brute_force_marginal: enumeration limited to N <= 22");
    if (k < 1 || k > n) throw ArgumentError("brute_force_marginal: need 1 <= k <= N");

    const std::uint32_t n_conf = std::uint32_t{1} << n;
    const std::uint32_t word_mask = (std::uint32_t{1} << k) - 1;
    const double* h = field.values.data();

    // bucket index of a configuration mask: bit i of the mask is site i+1,
    // set bit means spin -1; the table wants site 1 most significant.
    std::vector<std::uint32_t> bucket_of(std::size_t{1} << k);
    for (std::uint32_t w = 0; w < bucket_of.size(); ++w) {
        std::uint32_t r = 0;
        for (int i = 0; i < k; ++i) r |= ((w >> i) & 1u) << (k - 1 - i);
        bucket_of[w] = r;
    }

    // Gray-code walk: one spin flips per step, both sums update in O(1).
    const auto exponent = [&](double s, double f) {
        return params.beta * (s * s / (2.0 * n) + f);
    };

    double s_sum = n; // all +1 start
    double f_sum = 0.0;
    for (int i = 0; i < n; ++i) f_sum += h[i];

    double max_e = exponent(s_sum, f_sum);
    {
        double s = s_sum, f = f_sum;
        std::uint32_t gray = 0;
        for (std::uint32_t i = 1; i < n_conf; ++i) {
            const int bit = std::countr_zero(i);
            gray ^= std::uint32_t{1} << bit;
            const double dir = (gray >> bit) & 1u ? -1.0 : 1.0; // new spin value
            s += 2.0 * dir;
            f += 2.0 * dir * h[bit];
            const double e = exponent(s, f);
            if (e > max_e) max_e = e;
        }
    }

    std::vector<double> acc(std::size_t{1} << k, 0.0);
    std::vector<double> comp(std::size_t{1} << k, 0.0); // Kahan carry
    const auto add = [&](std::uint32_t bucket, double w) {
        const double y = w - comp[bucket];
        const double t = acc[bucket] + y;
        comp[bucket] = (t - acc[bucket]) - y;
        acc[bucket] = t;
    };

    {
        double s = s_sum, f = f_sum;
        std::uint32_t gray = 0;
        add(bucket_of[0], std::exp(exponent(s, f) - max_e));
        for (std::uint32_t i = 1; i < n_conf; ++i) {
            const int bit = std::countr_zero(i);
            gray ^= std::uint32_t{1} << bit;
            const double dir = (gray >> bit) & 1u ? -1.0 : 1.0;
            s += 2.0 * dir;
            f += 2.0 * dir * h[bit];
            add(bucket_of[gray & word_mask], std::exp(exponent(s, f) - max_e));
        }
    }

    MarginalTable table(k, std::move(acc));
    table.normalize();
    return table;
}

MarginalTable product_marginal(double beta, double y, std::span<const double> field_prefix) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ArgumentError("product_marginal: beta must be finite and > 0");
    if (!std::isfinite(y)) throw ArgumentError("product_marginal: y must be finite");
    const int k = static_cast<int>(field_prefix.size());
    if (k < 1 || k > kMaxWordLen)
        throw ArgumentError("product_marginal: need 1 <= k <= 24");

    const double a = std::sqrt(beta);
    std::vector<double> table{1.0};
    table.reserve(std::size_t{1} << k);
    for (int i = 0; i < k; ++i) {
        const double t = a * y + beta * field_prefix[static_cast<std::size_t>(i)];
        const double p_up = 1.0 / (1.0 + std::exp(-2.0 * t)); // e^t / (2 cosh t)
        std::vector<double> next(table.size() * 2);
        for (std::size_t w = 0; w < table.size(); ++w) {
            next[2 * w] = table[w] * p_up;
            next[2 * w + 1] = table[w] * (1.0 - p_up);
        }
        table = std::move(next);
    }
    return MarginalTable(k, std::move(table));
}

} // namespace rfcw
