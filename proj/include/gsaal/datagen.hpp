#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsaal/matrix.hpp"
#include "gsaal/subspace.hpp"

namespace gsaal {

enum class Shape { Banana, Spiral, Star, Circle, L };

/// Synthetic subspace shape: two correlated features on a parametric curve
/// plus independent standard-Gaussian noise features.
struct ShapeSpec {
    Shape shape = Shape::Banana;
    std::size_t n_points = 960;
    std::size_t noise_features = 58;
    double noise_amplitude = 0.1;  // width of the additive U(0, amp) terms
    std::uint64_t seed = 42;
};

struct LabeledDataset {
    Matrix points;
    std::vector<int> labels;  // 0 inlier, 1 outlier
    std::vector<std::string> feature_names;
};

/// Coordinates on the noise-free curve; r is only used by Spiral.
/// Star returns the point for the already-accepted angle (sin(5*theta) >= 0).
void shape_curve_xy(Shape shape, double theta, double r, double& x, double& y);

LabeledDataset generate_shape(const ShapeSpec& spec);

enum class InlierFamily { Gaussian, GaussianMixture, UniformBox, Ring };
enum class OutlierType { Local, Cluster };
enum class IaReference { Lof, ClusterShift };

struct IaSpec {
    InlierFamily inlier_distribution = InlierFamily::Gaussian;
    OutlierType outlier_type = OutlierType::Cluster;
    std::size_t n_inliers = 2000;
    std::size_t n_outliers = 400;
    std::size_t d = 20;
    double cluster_shift = 6.0;           // Euclidean norm of the cluster mean offset
    std::size_t points_per_cluster = 50;  // cluster outliers come in small groups
    double lof_threshold = 1.5;           // a point counts as detected when LOF exceeds this
    std::uint64_t seed = 42;
};

struct IaDataset {
    Matrix train;                      // 80% of the inliers
    std::vector<LabeledDataset> tests;  // 10 splits: held-out inliers + one outlier batch
    std::vector<std::string> warnings;
};

IaDataset generate_ia_dataset(const IaSpec& spec, IaReference reference);

/// Linear-kernel MMD^2: squared distance between the sample means.
double mmd_linear(const Matrix& sample_a, const Matrix& sample_b);

/// Three-feature population for the myopicity check: x1 standard normal, x2
/// tightly coupled to x1, x3 independent noise -- or x1^2 when
/// dependent_third is set, which breaks myopicity.
Matrix myopic_population(std::size_t n, bool dependent_third, std::uint64_t seed);

/// Zeroes every column the mask does not select, keeping the full width.
Matrix zero_pad_view(const Matrix& m, const SubspaceMask& mask);

}  // namespace gsaal
