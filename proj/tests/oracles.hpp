// Independent reference implementations used as test oracles. Everything here
// is written from the definitions with plain loops and full sorts, sharing no
// code with the library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gsaal/matrix.hpp"

namespace oracles {

inline double euclid(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

// kNN outlier score: distance to the k-th nearest training point, full sort.
inline double knn_reference(const gsaal::Matrix& train, std::span<const double> q, int k) {
    std::vector<double> d;
    for (std::size_t i = 0; i < train.rows; ++i) d.push_back(euclid(train.row(i), q));
    std::sort(d.begin(), d.end());
    return d[static_cast<std::size_t>(k - 1)];
}

// LOF from the definitions: k-distance, reachability distance, local
// reachability density, then the ratio of neighbor densities.
struct LofReference {
    const gsaal::Matrix& train;
    int k;
    std::vector<double> kdist;
    std::vector<double> lrd;

    LofReference(const gsaal::Matrix& t, int kk) : train(t), k(kk) {
        const std::size_t n = train.rows;
        std::vector<std::vector<double>> dist(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                dist[i][j] = std::max(euclid(train.row(i), train.row(j)), 1e-12);
            }
        }
        kdist.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) row.push_back(dist[i][j]);
            }
            std::sort(row.begin(), row.end());
            kdist[i] = row[static_cast<std::size_t>(k - 1)];
        }
        lrd.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double reach = 0.0;
            std::size_t count = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || dist[i][j] > kdist[i]) continue;
                reach += std::max(kdist[j], dist[i][j]);
                ++count;
            }
            lrd[i] = static_cast<double>(count) / reach;
        }
    }

    double score(std::span<const double> q) const {
        const std::size_t n = train.rows;
        std::vector<double> d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = std::max(euclid(train.row(j), q), 1e-12);
        std::vector<double> sorted = d;
        std::sort(sorted.begin(), sorted.end());
        const double kd = sorted[static_cast<std::size_t>(k - 1)];
        double reach = 0.0;
        double lrd_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (d[j] > kd) continue;
            reach += std::max(kdist[j], d[j]);
            lrd_sum += lrd[j];
            ++count;
        }
        const double lrd_q = static_cast<double>(count) / reach;
        return lrd_sum / static_cast<double>(count) / lrd_q;
    }
};

// AUC as P(score_out > score_in) + 0.5 P(equal), by exhaustive pairs.
inline double auc_reference(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace oracles
