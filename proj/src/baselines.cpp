#include "gsaal/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsaal/errors.hpp"

namespace gsaal {

namespace {

constexpr double kDistanceFloor = 1e-12;

void check_query_dims(const Matrix& train, const Matrix& points, const char* what) {
    if (points.cols != train.cols) {
        throw ShapeError(std::string(what) + ": query has " + std::to_string(points.cols) +
                         " columns, training data has " + std::to_string(train.cols));
    }
}

void check_k(int k, std::size_t n, const char* what) {
    if (k < 1 || static_cast<std::size_t>(k) >= n) {
        throw ConfigError(std::string(what) + ": k_neighbors " + std::to_string(k) +
                          " must be in [1, n_train) with n_train " + std::to_string(n));
    }
}

std::vector<double> distances_to_train(const Matrix& train, std::span<const double> q,
                                       bool floored) {
    std::vector<double> d(train.rows);
    for (std::size_t i = 0; i < train.rows; ++i) {
        d[i] = std::sqrt(squared_distance(train.row(i), q));
        if (floored && d[i] < kDistanceFloor) d[i] = kDistanceFloor;
    }
    return d;
}

double kth_smallest(std::vector<double> d, int k) {
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    return d[static_cast<std::size_t>(k - 1)];
}

}  // namespace

KnnModel fit_knn(Matrix training_points, int k_neighbors) {
    check_k(k_neighbors, training_points.rows, "fit_knn");
    return KnnModel{std::move(training_points), k_neighbors};
}

std::vector<double> knn_score(const KnnModel& model, const Matrix& points) {
    check_query_dims(model.training_points, points, "knn_score");
    check_k(model.k_neighbors, model.training_points.rows, "knn_score");
    std::vector<double> scores(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i) {
        scores[i] = kth_smallest(distances_to_train(model.training_points, points.row(i), false),
                                 model.k_neighbors);
    }
    return scores;
}

LofModel fit_lof(Matrix training_points, int k_neighbors) {
    check_k(k_neighbors, training_points.rows, "fit_lof");
    LofModel model;
    model.k_neighbors = k_neighbors;
    model.training_points = std::move(training_points);
    const Matrix& train = model.training_points;
    const std::size_t n = train.rows;

    // pairwise distances, self excluded via +inf on the diagonal
    std::vector<std::vector<double>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = distances_to_train(train, train.row(i), true);
        dist[i][i] = std::numeric_limits<double>::infinity();
    }

    model.k_distances.resize(n);
    model.neighbors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.k_distances[i] = kth_smallest(dist[i], k_neighbors);
        for (std::size_t j = 0; j < n; ++j) {
            if (dist[i][j] <= model.k_distances[i]) model.neighbors[i].push_back(j);
        }
    }
    model.lrd.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reach_sum = 0.0;
        for (std::size_t j : model.neighbors[i]) {
            reach_sum += std::max(model.k_distances[j], dist[i][j]);
        }
        model.lrd[i] = static_cast<double>(model.neighbors[i].size()) / reach_sum;
    }
    return model;
}

std::vector<double> lof_score(const LofModel& model, const Matrix& points) {
    check_query_dims(model.training_points, points, "lof_score");
    std::vector<double> scores(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i) {
        const std::vector<double> d =
            distances_to_train(model.training_points, points.row(i), true);
        const double kdist = kth_smallest(d, model.k_neighbors);
        double reach_sum = 0.0;
        double lrd_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] <= kdist) {
                reach_sum += std::max(model.k_distances[j], d[j]);
                lrd_sum += model.lrd[j];
                ++count;
            }
        }
        const double lrd_query = static_cast<double>(count) / reach_sum;
        scores[i] = lrd_sum / static_cast<double>(count) / lrd_query;
    }
    return scores;
}

}  // namespace gsaal
