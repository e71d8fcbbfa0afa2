#include "gsaal/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsaal/baselines.hpp"
#include "gsaal/errors.hpp"
#include "gsaal/rng.hpp"

namespace gsaal {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> feature_names(std::size_t d) {
    std::vector<std::string> names;
    names.reserve(d);
    for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    return names;
}

// Per-dataset state for the inlier families (mixture centers are drawn once).
struct FamilySampler {
    InlierFamily family;
    std::size_t d;
    std::vector<std::vector<double>> mixture_centers;

    FamilySampler(InlierFamily f, std::size_t dim, Rng& rng) : family(f), d(dim) {
        if (family == InlierFamily::GaussianMixture) {
            for (int c = 0; c < 3; ++c) {
                std::vector<double> center(d);
                for (double& v : center) v = rng.uniform(-4.0, 4.0);
                mixture_centers.push_back(std::move(center));
            }
        }
    }

    void sample(Rng& rng, double* out) const {
        switch (family) {
            case InlierFamily::Gaussian:
                for (std::size_t j = 0; j < d; ++j) out[j] = rng.normal();
                break;
            case InlierFamily::GaussianMixture: {
                const auto& c = mixture_centers[rng.below(mixture_centers.size())];
                for (std::size_t j = 0; j < d; ++j) out[j] = c[j] + rng.normal();
                break;
            }
            case InlierFamily::UniformBox:
                for (std::size_t j = 0; j < d; ++j) out[j] = rng.uniform(-1.0, 1.0);
                break;
            case InlierFamily::Ring: {
                double norm2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    out[j] = rng.normal();
                    norm2 += out[j] * out[j];
                }
                const double radius = 3.0 + 0.2 * rng.normal();
                const double scale = radius / std::sqrt(std::max(norm2, 1e-30));
                for (std::size_t j = 0; j < d; ++j) out[j] *= scale;
                break;
            }
        }
    }
};

std::vector<double> random_unit_vector(std::size_t d, Rng& rng) {
    std::vector<double> v(d);
    double norm2 = 0.0;
    for (double& x : v) {
        x = rng.normal();
        norm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(std::max(norm2, 1e-30));
    for (double& x : v) x *= inv;
    return v;
}

}  // namespace

void shape_curve_xy(Shape shape, double theta, double r, double& x, double& y) {
    switch (shape) {
        case Shape::Banana:
            x = std::sin(theta);
            y = x * x * x;
            break;
        case Shape::Spiral:
            x = r * std::cos(theta);
            y = r * std::sin(theta);
            break;
        case Shape::Star: {
            const double radius = std::max(std::sin(5.0 * theta), 0.4);
            x = radius * std::cos(theta);
            y = radius * std::sin(theta);
            break;
        }
        case Shape::Circle:
            x = std::cos(theta);
            y = std::sin(theta);
            break;
        case Shape::L:
            x = 0.0;
            y = 0.0;
            break;
    }
}

LabeledDataset generate_shape(const ShapeSpec& spec) {
    if (spec.n_points < 1) throw DomainError("generate_shape: n_points must be positive");
    const std::size_t d = 2 + spec.noise_features;
    const double amp = spec.noise_amplitude;
    Rng rng(spec.seed);

    LabeledDataset ds;
    ds.points = Matrix(spec.n_points, d);
    ds.labels.assign(spec.n_points, 0);
    ds.feature_names = feature_names(d);

    for (std::size_t i = 0; i < spec.n_points; ++i) {
        double x = 0.0;
        double y = 0.0;
        switch (spec.shape) {
            case Shape::Banana: {
                shape_curve_xy(Shape::Banana, rng.uniform(0.0, kPi), 0.0, x, y);
                x += rng.uniform(0.0, amp);
                y += rng.uniform(0.0, amp);
                break;
            }
            case Shape::Spiral: {
                const double theta = rng.uniform(0.0, 4.0 * kPi);
                shape_curve_xy(Shape::Spiral, theta, rng.uniform01(), x, y);
                x += rng.uniform(0.0, amp);
                break;
            }
            case Shape::Star: {
                double theta = rng.uniform(0.0, 2.0 * kPi);
                while (std::sin(5.0 * theta) < 0.0) theta = rng.uniform(0.0, 2.0 * kPi);
                shape_curve_xy(Shape::Star, theta, 0.0, x, y);
                x += rng.uniform(0.0, amp);
                y += rng.uniform(0.0, amp);
                break;
            }
            case Shape::Circle: {
                shape_curve_xy(Shape::Circle, rng.uniform(0.0, 2.0 * kPi), 0.0, x, y);
                x += rng.uniform(0.0, amp);
                y += rng.uniform(0.0, amp);
                break;
            }
            case Shape::L: {
                // two axis-aligned segments with a Gaussian cross-section of
                // variance 0.1, scaled with the noise amplitude
                const double cross = std::sqrt(0.1) * (amp / 0.1) * rng.normal();
                if (rng.bernoulli()) {
                    x = cross;
                    y = rng.uniform(-5.0, 0.0);
                } else {
                    x = rng.uniform(0.0, 5.0);
                    y = cross;
                }
                break;
            }
        }
        ds.points(i, 0) = x;
        ds.points(i, 1) = y;
        for (std::size_t j = 2; j < d; ++j) ds.points(i, j) = rng.normal();
    }
    return ds;
}

IaDataset generate_ia_dataset(const IaSpec& spec, IaReference reference) {
    if (spec.n_inliers < 5 || spec.n_outliers < 1) {
        throw DomainError("generate_ia_dataset: counts too small");
    }
    if (spec.d < 2) throw DomainError("generate_ia_dataset: d must be at least 2");
    if (spec.outlier_type == OutlierType::Local && reference != IaReference::Lof) {
        throw ConfigError("generate_ia_dataset: Local outliers require the Lof reference");
    }
    if (spec.outlier_type == OutlierType::Cluster && reference != IaReference::ClusterShift) {
        throw ConfigError("generate_ia_dataset: Cluster outliers require the ClusterShift reference");
    }

    constexpr std::size_t kBatches = 10;
    constexpr std::size_t kMaxDraws = 1000000;

    Rng rng(spec.seed);
    FamilySampler sampler(spec.inlier_distribution, spec.d, rng);

    IaDataset out;
    if (spec.outlier_type == OutlierType::Cluster && spec.cluster_shift == 0.0) {
        out.warnings.push_back(
            "cluster_shift is 0: outlier clusters coincide with the inlier distribution");
    }

    Matrix inliers(spec.n_inliers, spec.d);
    for (std::size_t i = 0; i < spec.n_inliers; ++i) {
        sampler.sample(rng, inliers.data.data() + i * spec.d);
    }

    // 80/20 inlier split
    std::vector<std::size_t> idx(spec.n_inliers);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(spec.n_inliers)));
    out.train = Matrix(n_train, spec.d);
    Matrix holdout(spec.n_inliers - n_train, spec.d);
    for (std::size_t i = 0; i < n_train; ++i) {
        std::copy_n(inliers.row(idx[i]).data(), spec.d, out.train.row(i).data());
    }
    for (std::size_t i = n_train; i < spec.n_inliers; ++i) {
        std::copy_n(inliers.row(idx[i]).data(), spec.d, holdout.row(i - n_train).data());
    }

    LofModel lof;
    std::vector<double> box_lo(spec.d), box_hi(spec.d);
    if (spec.outlier_type == OutlierType::Local) {
        lof = fit_lof(inliers, 20);
        for (std::size_t j = 0; j < spec.d; ++j) {
            double lo = inliers(0, j);
            double hi = lo;
            for (std::size_t i = 1; i < spec.n_inliers; ++i) {
                lo = std::min(lo, inliers(i, j));
                hi = std::max(hi, inliers(i, j));
            }
            // bounding box inflated by 20% of the range, split between both sides
            const double pad = 0.1 * (hi - lo);
            box_lo[j] = lo - pad;
            box_hi[j] = hi + pad;
        }
    }

    for (std::size_t b = 0; b < kBatches; ++b) {
        Matrix outliers(spec.n_outliers, spec.d);
        if (spec.outlier_type == OutlierType::Local) {
            std::size_t kept = 0;
            std::size_t draws = 0;
            Matrix candidate(1, spec.d);
            while (kept < spec.n_outliers) {
                if (++draws > kMaxDraws) {
                    throw GenerationError(
                        "generate_ia_dataset: rejection sampling exceeded 1e6 draws; "
                        "consider lowering lof_threshold");
                }
                for (std::size_t j = 0; j < spec.d; ++j) {
                    candidate(0, j) = rng.uniform(box_lo[j], box_hi[j]);
                }
                if (lof_score(lof, candidate)[0] > spec.lof_threshold) {
                    std::copy_n(candidate.row(0).data(), spec.d, outliers.row(kept).data());
                    ++kept;
                }
            }
        } else {
            std::size_t written = 0;
            while (written < spec.n_outliers) {
                const std::vector<double> dir = random_unit_vector(spec.d, rng);
                const std::size_t cluster_size =
                    std::min(spec.points_per_cluster, spec.n_outliers - written);
                for (std::size_t p = 0; p < cluster_size; ++p) {
                    double* row = outliers.row(written).data();
                    sampler.sample(rng, row);
                    for (std::size_t j = 0; j < spec.d; ++j) {
                        row[j] += spec.cluster_shift * dir[j];
                    }
                    ++written;
                }
            }
        }

        LabeledDataset test;
        test.points = vstack(holdout, outliers);
        test.labels.assign(holdout.rows, 0);
        test.labels.insert(test.labels.end(), outliers.rows, 1);
        test.feature_names = feature_names(spec.d);
        out.tests.push_back(std::move(test));
    }
    return out;
}

double mmd_linear(const Matrix& sample_a, const Matrix& sample_b) {
    if (sample_a.rows == 0 || sample_b.rows == 0) {
        throw DomainError("mmd_linear: empty sample");
    }
    if (sample_a.cols != sample_b.cols) {
        throw ShapeError("mmd_linear: samples have different widths");
    }
    std::vector<double> mean_a, mean_b, unused;
    column_stats(sample_a, mean_a, unused);
    column_stats(sample_b, mean_b, unused);
    double acc = 0.0;
    for (std::size_t j = 0; j < mean_a.size(); ++j) {
        const double diff = mean_a[j] - mean_b[j];
        acc += diff * diff;
    }
    return acc;
}

Matrix myopic_population(std::size_t n, bool dependent_third, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = rng.normal();
        m(i, 0) = x1;
        m(i, 1) = std::tanh(x1) + 0.1 * rng.normal();
        m(i, 2) = dependent_third ? x1 * x1 : rng.normal();
    }
    return m;
}

Matrix zero_pad_view(const Matrix& m, const SubspaceMask& mask) {
    if (mask.dimension() != m.cols) {
        throw ShapeError("zero_pad_view: mask length does not match columns");
    }
    Matrix out = m;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (mask.selected[j]) continue;
        for (std::size_t i = 0; i < m.rows; ++i) out(i, j) = 0.0;
    }
    return out;
}

}  // namespace gsaal
