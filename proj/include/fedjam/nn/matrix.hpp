#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fedjam::nn {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Copies the listed rows of src into a new matrix, in order.
Matrix gather_rows(const Matrix& src, std::span<const std::size_t> rows);

} // namespace fedjam::nn
