#include "fedjam/nn/optim.hpp"

#include "fedjam/error.hpp"

#include <cmath>
#include <string>

namespace fedjam::nn {

std::string_view to_string(OptimizerKind kind) noexcept { return kind == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view name)
{
    if (name == "sgd")
        return OptimizerKind::sgd;
    if (name == "adam")
        return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

OptimizerState::OptimizerState(OptimizerConfig cfg) : config(cfg)
{
    if (!(config.lr >= 0.0))
        throw DomainError("learning rate must be non-negative");
}

namespace {

void check_length(const ModelState& model, std::span<const double> grad)
{
    if (grad.size() != model.params().size())
        throw ShapeError("optimizer: gradient length " + std::to_string(grad.size()) + " != parameter count " +
                         std::to_string(model.params().size()));
}

} // namespace

void sgd_step(OptimizerState& opt, ModelState& model, std::span<const double> grad)
{
    check_length(model, grad);
    const double lr = opt.config.lr;
    auto w = model.mutable_params();
    for (const ParamSlice& s : model.slices()) {
        if (s.frozen)
            continue;
        for (std::size_t i = s.offset; i < s.offset + s.size(); ++i)
            w[i] -= lr * grad[i];
    }
}

void adam_step(OptimizerState& opt, ModelState& model, std::span<const double> grad)
{
    check_length(model, grad);
    if (opt.m.size() != grad.size()) {
        opt.m.assign(grad.size(), 0.0);
        opt.v.assign(grad.size(), 0.0);
    }
    const OptimizerConfig& c = opt.config;
    ++opt.t;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(opt.t));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(opt.t));
    auto w = model.mutable_params();
    for (const ParamSlice& s : model.slices()) {
        if (s.frozen)
            continue;
        for (std::size_t i = s.offset; i < s.offset + s.size(); ++i) {
            const double g = grad[i];
            opt.m[i] = c.beta1 * opt.m[i] + (1.0 - c.beta1) * g;
            opt.v[i] = c.beta2 * opt.v[i] + (1.0 - c.beta2) * g * g;
            const double m_hat = opt.m[i] / bc1;
            const double v_hat = opt.v[i] / bc2;
            w[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
        }
    }
}

void optimizer_step(OptimizerState& opt, ModelState& model, std::span<const double> grad)
{
    if (opt.config.kind == OptimizerKind::sgd)
        sgd_step(opt, model, grad);
    else
        adam_step(opt, model, grad);
}

} // namespace fedjam::nn
