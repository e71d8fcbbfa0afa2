#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsaal/matrix.hpp"

namespace gsaal {

/// Binary feature-selection vector. Legal masks select at least one feature
/// and never all of them.
struct SubspaceMask {
    std::vector<std::uint8_t> selected;

    std::size_t dimension() const { return selected.size(); }
    std::size_t popcount() const;
    std::string to_string() const;  // e.g. "110"
    static SubspaceMask from_string(const std::string& bits);

    bool operator==(const SubspaceMask&) const = default;
};

struct MaskSet {
    std::vector<SubspaceMask> masks;
    std::size_t dimension = 0;
};

/// Keeps the selected coordinates of point, ascending index order.
std::vector<double> project(const SubspaceMask& mask, std::span<const double> point);

/// Column-projects a whole batch.
Matrix project(const SubspaceMask& mask, const Matrix& batch);

/// Draws k distinct masks, each entry Bernoulli(1/2), rejecting empty and
/// full masks and duplicates. Deterministic per seed.
MaskSet draw_masks(std::size_t d, std::size_t k, std::uint64_t seed);

/// Default detector count ceil(2*sqrt(d)).
std::size_t default_k(std::size_t d);

/// Discrete distribution over integer points; a test oracle kept at d <= 4
/// so that everything can be enumerated.
struct DiscreteDistribution {
    std::vector<std::vector<int>> support;
    std::vector<double> probabilities;
};

/// Probability mass of all support points whose projection equals
/// projected_point. Unseen projections give 0.
double marginal_pdf(const DiscreteDistribution& dist, const SubspaceMask& mask,
                    const std::vector<int>& projected_point);

/// (1/k) * sum_i marginal_pdf(dist, mask_i, project(mask_i, point)).
double averaged_marginal_statistic(const DiscreteDistribution& dist, const MaskSet& masks,
                                   const std::vector<int>& point);

}  // namespace gsaal
