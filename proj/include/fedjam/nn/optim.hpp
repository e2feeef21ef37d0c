#pragma once

#include "fedjam/nn/model.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fedjam::nn {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind kind) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::sgd;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Optimizer hyperparameters plus Adam moments; moments are sized lazily on first step.
struct OptimizerState {
    OptimizerConfig config{};
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit OptimizerState(OptimizerConfig cfg = {});
};

/// w <- w - lr * g on trainable slices.
void sgd_step(OptimizerState& opt, ModelState& model, std::span<const double> grad);

/// Bias-corrected Adam on trainable slices; increments t once per call.
void adam_step(OptimizerState& opt, ModelState& model, std::span<const double> grad);

/// Dispatches on opt.config.kind.
void optimizer_step(OptimizerState& opt, ModelState& model, std::span<const double> grad);

} // namespace fedjam::nn
