#pragma once

#include "fedjam/nn/matrix.hpp"
#include "fedjam/signal/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fedjam::pipeline {

struct PcaResult {
    /// k x d, orthonormal rows; the largest-magnitude coordinate of each is positive.
    nn::Matrix components;
    /// Covariance eigenvalues, descending.
    std::vector<double> eigenvalues;
    /// eigenvalue / total variance, descending.
    std::vector<double> explained_ratio;
    /// n x k projections of the centered rows.
    nn::Matrix projections;
    std::size_t iterations = 0;
};

struct PcaOptions {
    std::size_t max_iterations = 5000;
    double tolerance = 1e-10;
};

/// Top-k principal components of the sample covariance (1/(n-1)) by block
/// subspace iteration with Rayleigh-Ritz extraction. Zero-variance data yields
/// zero ratios and zero projections.
PcaResult principal_components(const nn::Matrix& data, std::size_t k, const PcaOptions& options = {});

/// Symmetric eigendecomposition of a small dense matrix by cyclic Jacobi.
/// Returns eigenvalues descending; eigenvectors as the columns of `vectors`.
void jacobi_eigen(const nn::Matrix& symmetric, std::vector<double>& values, nn::Matrix& vectors);

struct PcaDiagnostic {
    std::vector<std::uint32_t> client_ids;
    nn::Matrix projections;
    std::vector<double> explained_ratio;
};

/// Pools every observation (interleaved I/Q), z-scores each feature over the
/// pool and projects onto the top components.
PcaDiagnostic pca_diagnostic(std::span<const signal::ClientDataset> clients, std::size_t n_components = 2);

} // namespace fedjam::pipeline
