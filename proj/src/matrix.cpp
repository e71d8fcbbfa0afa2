#include "gsaal/matrix.hpp"

#include <cmath>
#include <string>

#include "gsaal/errors.hpp"

namespace gsaal {

namespace {

void check_inner(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": inner dimensions " + std::to_string(a) +
                         " and " + std::to_string(b) + " do not match");
    }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols);
    // ikj order: the inner loop streams a full row of b and c.
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        double* crow = c.data.data() + i * c.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = arow[k];
            const double* brow = b.data.data() + k * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_tn");
    Matrix c(a.cols, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        const double* brow = b.data.data() + i * b.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = arow[k];
            double* crow = c.data.data() + k * c.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_nt");
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        double* crow = c.data.data() + i * c.cols;
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + j * b.cols;
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.cols != b.cols) throw ShapeError("vstack: column counts differ");
    Matrix c(a.rows + b.rows, a.cols);
    std::copy(a.data.begin(), a.data.end(), c.data.begin());
    std::copy(b.data.begin(), b.data.end(), c.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    return c;
}

bool all_finite(const Matrix& m) {
    for (double v : m.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void column_stats(const Matrix& m, std::vector<double>& mean, std::vector<double>& stddev) {
    mean.assign(m.cols, 0.0);
    stddev.assign(m.cols, 0.0);
    if (m.rows == 0) return;
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < m.cols; ++j) mean[j] /= static_cast<double>(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double d = row[j] - mean[j];
            stddev[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
        stddev[j] = std::sqrt(stddev[j] / static_cast<double>(m.rows));
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace gsaal
