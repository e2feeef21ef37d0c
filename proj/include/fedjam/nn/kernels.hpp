#pragma once

// Dense-layer kernels. Every output element is accumulated in a fixed order
// that does not depend on the OpenMP team size, so results are bitwise
// identical for any thread count.

#include <cstddef>
#include <span>

namespace fedjam::nn::kernels {

/// y[b][j] = bias[j] + sum_k x[b][k] * w[j][k]; w is [out x in] row-major.
void dense_forward(std::span<const double> x, std::size_t batch, std::size_t in, std::span<const double> w,
                   std::span<const double> bias, std::size_t out, std::span<double> y);

/// dw[j][k] = sum_b dy[b][j] * x[b][k];  db[j] = sum_b dy[b][j]. Overwrites dw/db.
void dense_grad_params(std::span<const double> dy, std::span<const double> x, std::size_t batch, std::size_t in,
                       std::size_t out, std::span<double> dw, std::span<double> db);

/// dx[b][k] = sum_j dy[b][j] * w[j][k]. Overwrites dx.
void dense_grad_input(std::span<const double> dy, std::span<const double> w, std::size_t batch, std::size_t in,
                      std::size_t out, std::span<double> dx);

} // namespace fedjam::nn::kernels

/// Serial textbook loops kept as the test oracle for the kernels above.
namespace fedjam::nn::kernels::reference {

void dense_forward(std::span<const double> x, std::size_t batch, std::size_t in, std::span<const double> w,
                   std::span<const double> bias, std::size_t out, std::span<double> y);

void dense_grad_params(std::span<const double> dy, std::span<const double> x, std::size_t batch, std::size_t in,
                       std::size_t out, std::span<double> dw, std::span<double> db);

void dense_grad_input(std::span<const double> dy, std::span<const double> w, std::size_t batch, std::size_t in,
                      std::size_t out, std::span<double> dx);

} // namespace fedjam::nn::kernels::reference
