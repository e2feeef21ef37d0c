#include "fedjam/nn/model.hpp"

#include "fedjam/error.hpp"
#include "fedjam/nn/kernels.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fedjam::nn {

Matrix gather_rows(const Matrix& src, std::span<const std::size_t> rows)
{
    Matrix out(rows.size(), src.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto r = src.row(rows[i]);
        std::copy(r.begin(), r.end(), out.row(i).begin());
    }
    return out;
}

std::string to_string(LayerKind kind)
{
    switch (kind) {
    case LayerKind::dense:
        return "dense";
    case LayerKind::relu:
        return "relu";
    case LayerKind::dropout:
        return "dropout";
    case LayerKind::sigmoid:
        return "sigmoid";
    }
    return "unknown";
}

void validate_layers(std::span<const LayerSpec> layers)
{
    if (layers.empty())
        throw ShapeError("model has no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        if (l.in_dim == 0 || l.out_dim == 0)
            throw ShapeError("layer " + std::to_string(i) + ": zero dimension");
        if (l.kind != LayerKind::dense && l.in_dim != l.out_dim)
            throw ShapeError("layer " + std::to_string(i) + ": " + to_string(l.kind) + " must preserve dimension");
        if (l.kind == LayerKind::dropout && !(l.rate >= 0.0 && l.rate < 1.0))
            throw DomainError("layer " + std::to_string(i) + ": dropout rate must lie in [0, 1)");
        if (i > 0 && layers[i - 1].out_dim != l.in_dim)
            throw ShapeError("layer " + std::to_string(i) + ": input dim " + std::to_string(l.in_dim) +
                             " does not match previous output dim " + std::to_string(layers[i - 1].out_dim));
    }
}

std::vector<ParamSlice> param_slices(std::span<const LayerSpec> layers)
{
    std::vector<ParamSlice> out;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        if (l.kind != LayerKind::dense)
            continue;
        ParamSlice s{i, offset, l.in_dim * l.out_dim, l.out_dim, l.frozen};
        offset += s.size();
        out.push_back(s);
    }
    return out;
}

std::size_t param_count(std::span<const LayerSpec> layers)
{
    std::size_t n = 0;
    for (const ParamSlice& s : param_slices(layers))
        n += s.size();
    return n;
}

std::size_t trainable_param_count(std::span<const LayerSpec> layers)
{
    std::size_t n = 0;
    for (const ParamSlice& s : param_slices(layers))
        if (!s.frozen)
            n += s.size();
    return n;
}

ModelState::ModelState(std::vector<LayerSpec> layers) : layers_(std::move(layers))
{
    validate_layers(layers_);
    slices_ = param_slices(layers_);
    params_.assign(param_count(layers_), 0.0);
}

ModelState ModelState::initialized(std::vector<LayerSpec> layers, std::uint64_t seed)
{
    ModelState m(std::move(layers));
    Rng rng(seed);
    for (const ParamSlice& s : m.slices_) {
        const LayerSpec& l = m.layers_[s.layer];
        const double limit = std::sqrt(6.0 / static_cast<double>(l.in_dim + l.out_dim));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (std::size_t i = 0; i < s.n_weights; ++i)
            m.params_[s.offset + i] = dist(rng);
    }
    return m;
}

std::size_t ModelState::input_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().in_dim; }
std::size_t ModelState::output_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().out_dim; }

void ModelState::set_frozen(std::size_t layer, bool frozen)
{
    if (layer >= layers_.size() || layers_[layer].kind != LayerKind::dense)
        throw ContractError("set_frozen: layer " + std::to_string(layer) + " is not a dense layer");
    layers_[layer].frozen = frozen;
    slices_ = param_slices(layers_);
}

std::vector<double> params_as_vector(const ModelState& model)
{
    auto p = model.params();
    return {p.begin(), p.end()};
}

void load_params(ModelState& model, std::span<const double> params)
{
    if (params.size() != model.params().size())
        throw ShapeError("load_params: expected " + std::to_string(model.params().size()) + " values, got " +
                         std::to_string(params.size()));
    auto dst = model.mutable_params();
    std::copy(params.begin(), params.end(), dst.begin());
}

namespace {

constexpr double kUnitScale = 1.0 / 9007199254740992.0; // 2^-53

inline double sigmoid(double z) noexcept
{
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> dropout_scale(std::size_t n, double rate, std::uint64_t seed)
{
    std::vector<double> mask(n);
    Rng rng(seed);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (double& m : mask)
        m = static_cast<double>(rng() >> 11) * kUnitScale >= rate ? keep_scale : 0.0;
    return mask;
}

const double* slice_ptr(const ModelState& model, const ParamSlice& s) { return model.params().data() + s.offset; }

// Applies layer i to `in`, writing `out`. Records the dropout mask when requested.
void apply_layer(const ModelState& model, std::size_t i, const Matrix& in, Matrix& out, bool train,
                 std::uint64_t seed, std::vector<double>* mask_out)
{
    const LayerSpec& l = model.layers()[i];
    const std::size_t batch = in.rows;
    switch (l.kind) {
    case LayerKind::dense: {
        const auto it = std::find_if(model.slices().begin(), model.slices().end(),
                                     [i](const ParamSlice& s) { return s.layer == i; });
        const double* w = slice_ptr(model, *it);
        out = Matrix(batch, l.out_dim);
        kernels::dense_forward(in.data, batch, l.in_dim, {w, it->n_weights}, {w + it->n_weights, it->n_bias},
                               l.out_dim, out.data);
        break;
    }
    case LayerKind::relu:
        out = in;
        for (double& v : out.data)
            v = v > 0.0 ? v : 0.0;
        break;
    case LayerKind::sigmoid:
        out = in;
        for (double& v : out.data)
            v = sigmoid(v);
        break;
    case LayerKind::dropout:
        out = in;
        if (train && l.rate > 0.0) {
            std::vector<double> mask = dropout_scale(in.data.size(), l.rate, derive_seed(seed, {i}));
            for (std::size_t k = 0; k < out.data.size(); ++k)
                out.data[k] *= mask[k];
            if (mask_out)
                *mask_out = std::move(mask);
        }
        break;
    }
}

void check_input(const ModelState& model, const Matrix& batch)
{
    if (model.layers().empty())
        throw ShapeError("forward: model has no layers");
    if (batch.rows == 0)
        throw ShapeError("forward: empty batch");
    if (batch.cols != model.input_dim())
        throw ShapeError("forward: layer 0 expects " + std::to_string(model.input_dim()) + " inputs, batch has " +
                         std::to_string(batch.cols));
}

} // namespace

ForwardResult forward(const ModelState& model, const Matrix& batch, std::uint64_t rng_seed)
{
    check_input(model, batch);
    const bool train = model.mode() == Mode::train;
    const std::size_t n = model.layers().size();
    ForwardResult res;
    ForwardCache& c = res.cache;
    c.layers = model.layers();
    c.model_version = model.version();
    c.activations.resize(n + 1);
    c.dropout_scale.resize(n);
    c.activations[0] = batch;
    for (std::size_t i = 0; i < n; ++i)
        apply_layer(model, i, c.activations[i], c.activations[i + 1], train, rng_seed, &c.dropout_scale[i]);
    res.output = c.activations[n];
    return res;
}

Matrix infer(const ModelState& model, const Matrix& batch)
{
    check_input(model, batch);
    Matrix cur = batch;
    Matrix next;
    for (std::size_t i = 0; i < model.layers().size(); ++i) {
        apply_layer(model, i, cur, next, false, 0, nullptr);
        std::swap(cur, next);
    }
    return cur;
}

std::vector<double> backward(const ModelState& model, const ForwardCache& cache, const Matrix& loss_grad)
{
    const std::size_t n = model.layers().size();
    if (cache.model_version != model.version() || cache.layers != model.layers() || cache.activations.size() != n + 1)
        throw ContractError("backward: cache was recorded against a different model state");
    const Matrix& output = cache.activations[n];
    if (loss_grad.rows != output.rows || loss_grad.cols != output.cols)
        throw ShapeError("backward: loss gradient shape does not match network output");

    std::vector<double> grad(model.params().size(), 0.0);
    // Input gradients are only needed above the lowest trainable dense layer.
    std::size_t lowest_trainable = n;
    for (const ParamSlice& s : model.slices())
        if (!s.frozen) {
            lowest_trainable = s.layer;
            break;
        }
    if (lowest_trainable == n)
        return grad;

    Matrix delta = loss_grad;
    Matrix next_delta;
    for (std::size_t ii = n; ii-- > lowest_trainable;) {
        const LayerSpec& l = model.layers()[ii];
        const Matrix& in = cache.activations[ii];
        const std::size_t batch = in.rows;
        const bool need_input_grad = ii > lowest_trainable;
        switch (l.kind) {
        case LayerKind::dense: {
            const auto it = std::find_if(model.slices().begin(), model.slices().end(),
                                         [ii](const ParamSlice& s) { return s.layer == ii; });
            if (!it->frozen) {
                double* g = grad.data() + it->offset;
                kernels::dense_grad_params(delta.data, in.data, batch, l.in_dim, l.out_dim, {g, it->n_weights},
                                           {g + it->n_weights, it->n_bias});
            }
            if (need_input_grad) {
                next_delta = Matrix(batch, l.in_dim);
                kernels::dense_grad_input(delta.data, {slice_ptr(model, *it), it->n_weights}, batch, l.in_dim,
                                          l.out_dim, next_delta.data);
                std::swap(delta, next_delta);
            }
            break;
        }
        case LayerKind::relu:
            for (std::size_t k = 0; k < delta.data.size(); ++k)
                if (!(in.data[k] > 0.0))
                    delta.data[k] = 0.0;
            break;
        case LayerKind::sigmoid: {
            const Matrix& s = cache.activations[ii + 1];
            for (std::size_t k = 0; k < delta.data.size(); ++k)
                delta.data[k] *= s.data[k] * (1.0 - s.data[k]);
            break;
        }
        case LayerKind::dropout: {
            const std::vector<double>& mask = cache.dropout_scale[ii];
            if (!mask.empty())
                for (std::size_t k = 0; k < delta.data.size(); ++k)
                    delta.data[k] *= mask[k];
            break;
        }
        }
    }
    return grad;
}

} // namespace fedjam::nn
