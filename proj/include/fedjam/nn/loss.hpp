#pragma once

#include "fedjam/nn/matrix.hpp"

#include <span>
#include <vector>

namespace fedjam::nn {

inline constexpr double kBceEpsilon = 1e-7;

struct MseResult {
    double loss = 0.0;
    Matrix grad;
};

/// Mean over all B*d entries of (recon - target)^2.
MseResult mse_loss(const Matrix& recon, const Matrix& target);

struct BceResult {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Mean binary cross-entropy; probabilities are clamped to [eps, 1-eps] first.
BceResult bce_loss(std::span<const double> probs, std::span<const double> labels);

} // namespace fedjam::nn
