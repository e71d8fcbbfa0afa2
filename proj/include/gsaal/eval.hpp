#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsaal/datagen.hpp"
#include "gsaal/gsaal.hpp"
#include "gsaal/matrix.hpp"

namespace gsaal {

/// One-class split: train on inliers only, test on the held-out inliers plus
/// every outlier.
struct OccSplit {
    Matrix train;
    Matrix test_points;
    std::vector<int> test_labels;
};

OccSplit occ_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed);

/// Rank-based ROC AUC (Mann-Whitney with average ranks for ties). Outliers
/// (label 1) are the positive class.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct EvalReport {
    std::string method_name;
    double auc = 0.0;
    std::size_t n_train = 0;
    std::size_t d = 0;
    std::size_t k_used = 0;
    double fit_seconds = 0.0;
    double score_seconds = 0.0;
    double per_point_seconds = 0.0;
};

/// One fit+eval per k on a shared split; masks are redrawn for each k.
std::vector<EvalReport> sensitivity_sweep(const LabeledDataset& data,
                                          const std::vector<std::size_t>& k_values,
                                          const TrainConfig& cfg);

struct TimingRow {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    double fit_seconds = 0.0;
    double score_seconds = 0.0;    // median of 3 repetitions
    double per_point_seconds = 0.0;
};

/// Inference-time measurement on random data. The n sweep fixes d = 100, the
/// d sweep fixes n = 500. Scoring is repeated 3 times and the median taken.
std::vector<TimingRow> scalability_run(const std::vector<std::size_t>& n_values,
                                       const std::vector<std::size_t>& d_values,
                                       std::size_t k, std::size_t n_test,
                                       const TrainConfig& cfg);

struct GridBounds {
    double x1_min = -2.0;
    double x1_max = 2.0;
    double x2_min = -2.0;
    double x2_max = 2.0;
};

/// Writes x1,x2,score rows for the level-curve grid.
void export_grid_csv(const GsaalModel& model, const GridBounds& bounds, std::size_t resolution,
                     const std::string& path);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace gsaal
