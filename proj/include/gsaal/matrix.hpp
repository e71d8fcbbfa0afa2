#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsaal {

/// Dense row-major matrix of doubles. The universal carrier for datasets,
/// weights and activations.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    bool empty() const { return rows == 0 || cols == 0; }

    bool operator==(const Matrix&) const = default;
};

/// C = A * B. Throws ShapeError on mismatched inner dimensions.
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A^T * B (A: n x k, B: n x m, C: k x m).
Matrix matmul_tn(const Matrix& a, const Matrix& b);

/// C = A * B^T (A: n x k, B: m x k, C: n x m).
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// Stacks b below a (column counts must agree).
Matrix vstack(const Matrix& a, const Matrix& b);

/// True if every entry is finite.
bool all_finite(const Matrix& m);

/// Per-column mean and standard deviation (population, i.e. divides by n).
void column_stats(const Matrix& m, std::vector<double>& mean, std::vector<double>& stddev);

/// Squared Euclidean distance between two rows of equal length.
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace gsaal
