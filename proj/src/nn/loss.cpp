#include "fedjam/nn/loss.hpp"

#include "fedjam/error.hpp"

#include <algorithm>
#include <cmath>

namespace fedjam::nn {

MseResult mse_loss(const Matrix& recon, const Matrix& target)
{
    if (recon.rows != target.rows || recon.cols != target.cols)
        throw ShapeError("mse_loss: shape mismatch");
    const auto n = static_cast<double>(recon.data.size());
    MseResult r;
    r.grad = Matrix(recon.rows, recon.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < recon.data.size(); ++i) {
        const double d = recon.data[i] - target.data[i];
        acc += d * d;
        r.grad.data[i] = 2.0 * d / n;
    }
    r.loss = acc / n;
    return r;
}

BceResult bce_loss(std::span<const double> probs, std::span<const double> labels)
{
    if (probs.size() != labels.size() || probs.empty())
        throw ShapeError("bce_loss: probs and labels must be non-empty and equally long");
    const auto n = static_cast<double>(probs.size());
    BceResult r;
    r.grad.resize(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], kBceEpsilon, 1.0 - kBceEpsilon);
        const double y = labels[i];
        acc += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        r.grad[i] = (p - y) / (p * (1.0 - p) * n);
    }
    r.loss = -acc / n;
    return r;
}

} // namespace fedjam::nn
