#pragma once

#include <vector>

#include "gsaal/matrix.hpp"

namespace gsaal {

/// Distance-to-kth-neighbor outlier scorer. Exact brute-force search.
struct KnnModel {
    Matrix training_points;
    int k_neighbors = 5;
};

KnnModel fit_knn(Matrix training_points, int k_neighbors = 5);

/// Score of a query is its Euclidean distance to the k-th nearest training
/// point. Larger means more outlying.
std::vector<double> knn_score(const KnnModel& model, const Matrix& points);

/// Local Outlier Factor with cached k-distances and local reachability
/// densities per training point. Pairwise distances are floored at 1e-12 so
/// duplicate points cannot produce infinite densities.
struct LofModel {
    Matrix training_points;
    int k_neighbors = 20;
    std::vector<double> k_distances;
    std::vector<double> lrd;
    std::vector<std::vector<std::size_t>> neighbors;
};

LofModel fit_lof(Matrix training_points, int k_neighbors = 20);

/// Standard LOF of each query against the training set; values near 1 mean
/// the query sits in a region of typical density.
std::vector<double> lof_score(const LofModel& model, const Matrix& points);

}  // namespace gsaal
