#include "rfcw/spin.hpp"

#include <cmath>
#include <limits>

#include "rfcw/errors.hpp"

namespace rfcw {

namespace {

void check_word_len(int k) {
    if (k < 1 || k > kMaxWordLen)
        throw ArgumentError("spin word length must be in [1, 24]");
}

} // namespace

SpinWord::SpinWord(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
    check_word_len(static_cast<int>(spins_.size()));
    for (auto s : spins_)
        if (s != 1 && s != -1) throw ArgumentError("spin word entries must be +-1");
}

SpinWord::SpinWord(std::initializer_list<int> spins) {
    check_word_len(static_cast<int>(spins.size()));
    spins_.reserve(spins.size());
    for (int s : spins) {
        if (s != 1 && s != -1) throw ArgumentError("spin word entries must be +-1");
        spins_.push_back(static_cast<std::int8_t>(s));
    }
}

SpinWord SpinWord::from_index(std::uint32_t index, int k) {
    check_word_len(k);
    if (index >> k) throw ArgumentError("spin word index out of range");
    std::vector<std::int8_t> s(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        s[static_cast<std::size_t>(i)] = (index >> (k - 1 - i)) & 1u ? -1 : 1;
    return SpinWord(std::move(s));
}

std::uint32_t SpinWord::index() const {
    std::uint32_t idx = 0;
    for (auto s : spins_) idx = (idx << 1) | (s < 0 ? 1u : 0u);
    return idx;
}

std::string SpinWord::to_string() const {
    std::string out;
    out.reserve(spins_.size());
    for (auto s : spins_) out.push_back(s > 0 ? '+' : '-');
    return out;
}

MarginalTable::MarginalTable(int k) : k_(k) {
    check_word_len(k);
    p_.assign(std::size_t{1} << k, 0.0);
}

MarginalTable::MarginalTable(int k, std::vector<double> probs) : k_(k), p_(std::move(probs)) {
    check_word_len(k);
    if (p_.size() != (std::size_t{1} << k))
        throw ArgumentError("marginal table: wrong number of entries");
}

double MarginalTable::at(const SpinWord& w) const {
    if (w.size() != k_) throw ArgumentError("marginal table: word length mismatch");
    return p_[w.index()];
}

double MarginalTable::sum() const {
    double s = 0.0;
    for (double v : p_) s += v;
    return s;
}

void MarginalTable::normalize() {
    const double s = sum();
    if (!(s > 0.0)) throw NumericalError("marginal table: cannot normalize zero mass");
    for (double& v : p_) v /= s;
}

bool MarginalTable::is_distribution(double tol) const {
    for (double v : p_)
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
    return std::fabs(sum() - 1.0) <= tol;
}

MarginalTable MarginalTable::marginalize_last() const {
    if (k_ < 2) throw ArgumentError("marginalize_last: need word length >= 2");
    MarginalTable out(k_ - 1);
    for (std::uint32_t i = 0; i < size(); ++i) out[i >> 1] += p_[i];
    return out;
}

MarginalTable MarginalTable::flip_all_spins() const {
    MarginalTable out(k_);
    const std::uint32_t mask = size() - 1;
    for (std::uint32_t i = 0; i < size(); ++i) out[~i & mask] = p_[i];
    return out;
}

MarginalTable MarginalTable::reorder_sites(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != k_)
        throw ArgumentError("reorder_sites: permutation length mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(k_), false);
    for (int p : perm) {
        if (p < 0 || p >= k_ || seen[static_cast<std::size_t>(p)])
            throw ArgumentError("reorder_sites: not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }
    MarginalTable out(k_);
    for (std::uint32_t i = 0; i < size(); ++i) {
        std::uint32_t j = 0;
        for (int pos = 0; pos < k_; ++pos) {
            const std::uint32_t bit = (i >> (k_ - 1 - perm[static_cast<std::size_t>(pos)])) & 1u;
            j |= bit << (k_ - 1 - pos);
        }
        out[j] = p_[i];
    }
    return out;
}

double kl_divergence(const MarginalTable& p, const MarginalTable& q) {
    if (p.word_len() != q.word_len())
        throw ArgumentError("kl_divergence: word length mismatch");
    double s = 0.0;
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        s += p[i] * std::log(p[i] / q[i]);
    }
    return s;
}

double tv_distance(const MarginalTable& p, const MarginalTable& q) {
    if (p.word_len() != q.word_len())
        throw ArgumentError("tv_distance: word length mismatch");
    double s = 0.0;
    for (std::uint32_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

} // namespace rfcw
