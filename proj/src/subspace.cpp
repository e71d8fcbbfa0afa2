#include "gsaal/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gsaal/errors.hpp"
#include "gsaal/rng.hpp"

namespace gsaal {

std::size_t SubspaceMask::popcount() const {
    return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), 1));
}

std::string SubspaceMask::to_string() const {
    std::string s(selected.size(), '0');
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (selected[i]) s[i] = '1';
    }
    return s;
}

SubspaceMask SubspaceMask::from_string(const std::string& bits) {
    SubspaceMask mask;
    mask.selected.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') throw ParseError("mask string must contain only 0 and 1");
        mask.selected.push_back(c == '1' ? 1 : 0);
    }
    return mask;
}

std::vector<double> project(const SubspaceMask& mask, std::span<const double> point) {
    if (mask.dimension() != point.size()) {
        throw ShapeError("project: mask length " + std::to_string(mask.dimension()) +
                         " does not match point length " + std::to_string(point.size()));
    }
    std::vector<double> out;
    out.reserve(mask.popcount());
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (mask.selected[i]) out.push_back(point[i]);
    }
    return out;
}

Matrix project(const SubspaceMask& mask, const Matrix& batch) {
    if (mask.dimension() != batch.cols) {
        throw ShapeError("project: mask length does not match batch columns");
    }
    std::vector<std::size_t> idx;
    idx.reserve(mask.popcount());
    for (std::size_t j = 0; j < mask.dimension(); ++j) {
        if (mask.selected[j]) idx.push_back(j);
    }
    Matrix out(batch.rows, idx.size());
    for (std::size_t i = 0; i < batch.rows; ++i) {
        const double* src = batch.data.data() + i * batch.cols;
        double* dst = out.data.data() + i * out.cols;
        for (std::size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
    }
    return out;
}

MaskSet draw_masks(std::size_t d, std::size_t k, std::uint64_t seed) {
    if (d < 2) throw DomainError("draw_masks: dimension must be at least 2");
    // 2^d - 2 legal masks; only enforceable without overflow for small d.
    if (d < 63) {
        const std::uint64_t capacity = (std::uint64_t{1} << d) - 2;
        if (k > capacity) {
            throw CapacityError("draw_masks: requested " + std::to_string(k) +
                                " distinct masks but only " + std::to_string(capacity) +
                                " exist for dimension " + std::to_string(d));
        }
    }
    Rng rng(seed);
    MaskSet set;
    set.dimension = d;
    std::set<std::string> seen;
    while (set.masks.size() < k) {
        SubspaceMask mask;
        mask.selected.resize(d);
        for (std::size_t i = 0; i < d; ++i) mask.selected[i] = rng.bernoulli() ? 1 : 0;
        const std::size_t pc = mask.popcount();
        if (pc == 0 || pc == d) continue;
        if (!seen.insert(mask.to_string()).second) continue;
        set.masks.push_back(std::move(mask));
    }
    return set;
}

std::size_t default_k(std::size_t d) {
    if (d < 2) throw DomainError("default_k: dimension must be at least 2");
    return static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(d))));
}

namespace {

std::vector<int> project_ints(const SubspaceMask& mask, const std::vector<int>& point) {
    std::vector<int> out;
    out.reserve(mask.popcount());
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (mask.selected[i]) out.push_back(point[i]);
    }
    return out;
}

}  // namespace

double marginal_pdf(const DiscreteDistribution& dist, const SubspaceMask& mask,
                    const std::vector<int>& projected_point) {
    if (projected_point.size() != mask.popcount()) {
        throw ShapeError("marginal_pdf: projected point length does not match mask popcount");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        if (project_ints(mask, dist.support[i]) == projected_point) {
            mass += dist.probabilities[i];
        }
    }
    return mass;
}

double averaged_marginal_statistic(const DiscreteDistribution& dist, const MaskSet& masks,
                                   const std::vector<int>& point) {
    if (masks.masks.empty()) throw DomainError("averaged_marginal_statistic: no masks");
    double acc = 0.0;
    for (const SubspaceMask& mask : masks.masks) {
        acc += marginal_pdf(dist, mask, project_ints(mask, point));
    }
    return acc / static_cast<double>(masks.masks.size());
}

}  // namespace gsaal
