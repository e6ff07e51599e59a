#ifndef RFCW_SPIN_HPP
#define RFCW_SPIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rfcw {

inline constexpr int kMaxWordLen = 24;

// Joint +-1 assignment of the first k sites.  Word indices enumerate
// lexicographically with site 1 as the most significant position and
// +1 -> 0, -1 -> 1, so index 0 is the all +1 word.
class SpinWord {
public:
    explicit SpinWord(std::vector<std::int8_t> spins);
    SpinWord(std::initializer_list<int> spins);
    static SpinWord from_index(std::uint32_t index, int k);

    int size() const { return static_cast<int>(spins_.size()); }
    int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
    std::uint32_t index() const;
    std::string to_string() const; // e.g. "++-"

private:
    std::vector<std::int8_t> spins_;
};

// Probability table over all 2^k spin words.
class MarginalTable {
public:
    explicit MarginalTable(int k);
    MarginalTable(int k, std::vector<double> probs);

    int word_len() const { return k_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(p_.size()); }
    double& operator[](std::uint32_t i) { return p_[i]; }
    double operator[](std::uint32_t i) const { return p_[i]; }
    double at(const SpinWord& w) const;

    double sum() const;
    void normalize();
    bool is_distribution(double tol = 1e-10) const;

    MarginalTable marginalize_last() const;
    MarginalTable flip_all_spins() const;
    // Result word w is scored as the source word with sites rearranged so that
    // position i reads source position perm[i].
    MarginalTable reorder_sites(std::span<const int> perm) const;

private:
    int k_;
    std::vector<double> p_;
};

// KL(p || q); +infinity when p charges a word of q-probability zero.
double kl_divergence(const MarginalTable& p, const MarginalTable& q);
double tv_distance(const MarginalTable& p, const MarginalTable& q);

} // namespace rfcw

#endif
