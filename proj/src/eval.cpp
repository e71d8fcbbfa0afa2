#include "gsaal/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "gsaal/csv.hpp"
#include "gsaal/errors.hpp"
#include "gsaal/rng.hpp"

namespace gsaal {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

Matrix random_points(std::size_t n, std::size_t d, Rng& rng) {
    Matrix m(n, d);
    for (double& v : m.data) v = rng.normal();
    return m;
}

TimingRow time_cell(std::size_t n, std::size_t d, std::size_t k, std::size_t n_test,
                    const TrainConfig& cfg, Rng& rng) {
    const MaskSet masks = draw_masks(d, k, rng.fork_seed());
    const Matrix train = random_points(n, d, rng);
    const Matrix test = random_points(n_test, d, rng);

    TrainConfig cell_cfg = cfg;
    cell_cfg.seed = rng.fork_seed();

    TimingRow row;
    row.n = n;
    row.d = d;
    row.k = k;

    auto t0 = clock_type::now();
    auto [model, trace] = fit(train, masks, cell_cfg);
    row.fit_seconds = seconds_since(t0);

    std::vector<double> reps;
    for (int r = 0; r < 3; ++r) {
        t0 = clock_type::now();
        volatile double sink = score(model, test)[0];
        (void)sink;
        reps.push_back(seconds_since(t0));
    }
    std::sort(reps.begin(), reps.end());
    row.score_seconds = reps[1];
    row.per_point_seconds = row.score_seconds / static_cast<double>(n_test);
    return row;
}

}  // namespace

OccSplit occ_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed) {
    std::vector<std::size_t> inliers;
    std::vector<std::size_t> outliers;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        (data.labels[i] == 0 ? inliers : outliers).push_back(i);
    }
    if (inliers.empty()) throw DomainError("occ_split: no inliers");
    if (outliers.empty()) throw DomainError("occ_split: no outliers");

    Rng rng(seed);
    rng.shuffle(inliers);
    const std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(inliers.size())));

    OccSplit split;
    split.train = Matrix(n_train, data.points.cols);
    for (std::size_t i = 0; i < n_train; ++i) {
        std::copy_n(data.points.row(inliers[i]).data(), data.points.cols,
                    split.train.row(i).data());
    }
    const std::size_t n_test = inliers.size() - n_train + outliers.size();
    split.test_points = Matrix(n_test, data.points.cols);
    split.test_labels.reserve(n_test);
    std::size_t row = 0;
    for (std::size_t i = n_train; i < inliers.size(); ++i, ++row) {
        std::copy_n(data.points.row(inliers[i]).data(), data.points.cols,
                    split.test_points.row(row).data());
        split.test_labels.push_back(0);
    }
    for (std::size_t idx : outliers) {
        std::copy_n(data.points.row(idx).data(), data.points.cols,
                    split.test_points.row(row).data());
        split.test_labels.push_back(1);
        ++row;
    }
    return split;
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw ShapeError("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int label : labels) n_pos += label != 0 ? 1 : 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DomainError("roc_auc: both classes must be present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // ascending average ranks, ties share the mean rank
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
        i = j + 1;
    }
    double pos_rank_sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (labels[t] != 0) pos_rank_sum += rank[t];
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<EvalReport> sensitivity_sweep(const LabeledDataset& data,
                                          const std::vector<std::size_t>& k_values,
                                          const TrainConfig& cfg) {
    const OccSplit split = occ_split(data, 0.8, cfg.seed);
    std::vector<EvalReport> reports;
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        const std::size_t k = k_values[ki];
        // fresh masks per k, deterministic per (seed, position)
        Rng mask_rng(cfg.seed + 0x9e3779b97f4a7c15ULL * (ki + 1));
        const MaskSet masks = draw_masks(data.points.cols, k, mask_rng.fork_seed());

        EvalReport report;
        report.method_name = "gsaal_k" + std::to_string(k);
        report.n_train = split.train.rows;
        report.d = split.train.cols;
        report.k_used = k;

        auto t0 = clock_type::now();
        auto [model, trace] = fit(split.train, masks, cfg);
        report.fit_seconds = seconds_since(t0);

        t0 = clock_type::now();
        const std::vector<double> s = score(model, split.test_points);
        report.score_seconds = seconds_since(t0);
        report.per_point_seconds =
            report.score_seconds / static_cast<double>(split.test_points.rows);
        report.auc = roc_auc(s, split.test_labels);
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<TimingRow> scalability_run(const std::vector<std::size_t>& n_values,
                                       const std::vector<std::size_t>& d_values,
                                       std::size_t k, std::size_t n_test,
                                       const TrainConfig& cfg) {
    if (n_values.empty() && d_values.empty()) {
        throw ConfigError("scalability_run: nothing to sweep");
    }
    if (n_test < 1) throw ConfigError("scalability_run: n_test must be positive");
    Rng rng(cfg.seed);
    std::vector<TimingRow> rows;
    for (std::size_t n : n_values) {
        rows.push_back(time_cell(n, 100, k, n_test, cfg, rng));
    }
    for (std::size_t d : d_values) {
        rows.push_back(time_cell(500, d, k, n_test, cfg, rng));
    }
    return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    return v;
}

void export_grid_csv(const GsaalModel& model, const GridBounds& bounds, std::size_t resolution,
                     const std::string& path) {
    if (resolution < 2) throw ConfigError("export_grid_csv: resolution must be at least 2");
    const std::vector<double> x1 = linspace(bounds.x1_min, bounds.x1_max, resolution);
    const std::vector<double> x2 = linspace(bounds.x2_min, bounds.x2_max, resolution);
    const Matrix grid = score_grid(model, x1, x2);
    Matrix table(resolution * resolution, 3);
    std::size_t row = 0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        for (std::size_t j = 0; j < x2.size(); ++j, ++row) {
            table(row, 0) = x1[i];
            table(row, 1) = x2[j];
            table(row, 2) = grid(i, j);
        }
    }
    write_csv(path, {"x1", "x2", "score"}, table);
}

}  // namespace gsaal
