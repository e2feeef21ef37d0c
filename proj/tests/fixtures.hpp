#pragma once

#include "fedjam/fl/federation.hpp"

#include <random>
#include <vector>

namespace fixtures {

/// Gaussian features with a noiseless linear labeling rule; client k's
/// features are shifted by k so the clients are not identically distributed.
inline std::vector<fedjam::fl::ClientData> linear_clients(std::size_t n_clients, std::size_t rows, std::size_t dim,
                                                          std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<double> direction(dim);
    for (double& d : direction)
        d = n(rng);
    auto fill = [&](fedjam::nn::Matrix& x, std::vector<double>& y, std::size_t r, double shift) {
        x = fedjam::nn::Matrix(r, dim);
        y.assign(r, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                x(i, j) = n(rng) + shift;
                s += (x(i, j) - shift) * direction[j];
            }
            y[i] = s > 0.0 ? 1.0 : 0.0;
        }
    };
    std::vector<fedjam::fl::ClientData> out(n_clients);
    for (std::size_t k = 0; k < n_clients; ++k) {
        auto& c = out[k];
        c.client_id = static_cast<std::uint32_t>(10 + k);
        const double shift = 0.2 * static_cast<double>(k);
        fill(c.train_x, c.train_y, rows + 3 * k, shift);
        fill(c.valid_x, c.valid_y, rows / 4 + 1, shift);
        fill(c.test_x, c.test_y, rows / 4 + 2, shift);
    }
    return out;
}

} // namespace fixtures
