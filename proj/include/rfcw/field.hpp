#ifndef RFCW_FIELD_HPP
#define RFCW_FIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rfcw {

struct FieldAtom {
    double value = 0.0;
    double prob = 0.0;
};

// Finitely supported law of one external field entry.
class FieldSpec {
public:
    FieldSpec(std::string name, std::vector<FieldAtom> support);

    // +-h with equal weight; h == 0 collapses to a point mass.
    static FieldSpec dichotomous(double h);
    static FieldSpec point_mass(double value);

    const std::string& name() const { return name_; }
    const std::vector<FieldAtom>& support() const { return support_; }

    double mean() const;
    double abs_mean() const;
    double second_moment() const;
    bool contains(double value) const;

private:
    std::string name_;
    std::vector<FieldAtom> support_;
};

// One quenched draw of the external fields.
struct FieldSample {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string spec_name;
};

FieldSample sample_field(const FieldSpec& spec, std::size_t n, std::uint64_t seed);

// Weighted finite support, used for both the spec law and compressed samples.
// Values keep first-appearance order so that negating every value maps
// term i to term i; together with y -> -y this makes mirrored evaluations
// bit-identical.
struct WeightedValues {
    std::vector<double> values;
    std::vector<double> weights;
};

WeightedValues measure_of(const FieldSpec& spec);
WeightedValues measure_of(const FieldSample& sample);

} // namespace rfcw

#endif
