#pragma once

#include "fedjam/nn/matrix.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fedjam::nn {

enum class LayerKind : std::uint8_t { dense = 0, relu = 1, dropout = 2, sigmoid = 3 };

std::string to_string(LayerKind kind);

/// One layer. Activation and dropout layers carry in_dim == out_dim.
struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    double rate = 0.0;
    bool frozen = false;

    static LayerSpec dense(std::size_t in, std::size_t out, bool frozen = false)
    {
        return {LayerKind::dense, in, out, 0.0, frozen};
    }
    static LayerSpec relu(std::size_t dim) { return {LayerKind::relu, dim, dim, 0.0, false}; }
    static LayerSpec dropout(std::size_t dim, double rate) { return {LayerKind::dropout, dim, dim, rate, false}; }
    static LayerSpec sigmoid(std::size_t dim) { return {LayerKind::sigmoid, dim, dim, 0.0, false}; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Throws ShapeError (with layer index) for incompatible chains, DomainError for bad rates.
void validate_layers(std::span<const LayerSpec> layers);

/// Location of one dense layer's weights ([out x in] row-major) and bias in the flat vector.
struct ParamSlice {
    std::size_t layer = 0;
    std::size_t offset = 0;
    std::size_t n_weights = 0;
    std::size_t n_bias = 0;
    bool frozen = false;

    std::size_t size() const noexcept { return n_weights + n_bias; }
};

std::vector<ParamSlice> param_slices(std::span<const LayerSpec> layers);
std::size_t param_count(std::span<const LayerSpec> layers);
std::size_t trainable_param_count(std::span<const LayerSpec> layers);

enum class Mode { train, eval };

/// Architecture plus flat parameter vector (canonical order: per dense layer,
/// weights row-major then bias). Every parameter mutation bumps version(),
/// which lets backward() reject caches recorded against older parameters.
class ModelState {
public:
    ModelState() = default;
    explicit ModelState(std::vector<LayerSpec> layers);

    /// Weights uniform in ±sqrt(6/(in+out)), biases zero.
    static ModelState initialized(std::vector<LayerSpec> layers, std::uint64_t seed);

    const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
    const std::vector<ParamSlice>& slices() const noexcept { return slices_; }
    std::span<const double> params() const noexcept { return params_; }
    std::span<double> mutable_params() noexcept
    {
        ++version_;
        return params_;
    }

    Mode mode() const noexcept { return mode_; }
    void set_mode(Mode m) noexcept { mode_ = m; }

    std::uint64_t version() const noexcept { return version_; }
    std::size_t input_dim() const noexcept;
    std::size_t output_dim() const noexcept;

    /// Replaces the frozen flag of dense layer `layer`.
    void set_frozen(std::size_t layer, bool frozen);

private:
    std::vector<LayerSpec> layers_;
    std::vector<ParamSlice> slices_;
    std::vector<double> params_;
    Mode mode_ = Mode::train;
    std::uint64_t version_ = 0;
};

std::vector<double> params_as_vector(const ModelState& model);
/// Throws ShapeError for a wrong-length vector.
void load_params(ModelState& model, std::span<const double> params);

/// Per-layer activations recorded by forward(); activations[i] is the input of layer i
/// and activations.back() the network output.
struct ForwardCache {
    std::vector<Matrix> activations;
    std::vector<std::vector<double>> dropout_scale;
    std::vector<LayerSpec> layers;
    std::uint64_t model_version = 0;
};

struct ForwardResult {
    Matrix output;
    ForwardCache cache;
};

/// Dropout is inverted and active only in train mode; masks come from rng_seed.
ForwardResult forward(const ModelState& model, const Matrix& batch, std::uint64_t rng_seed);

/// Eval-mode forward without recording a cache.
Matrix infer(const ModelState& model, const Matrix& batch);

/// Reverse-mode parameter gradient. Frozen slices are zero. Throws ContractError
/// when the cache does not belong to the current model parameters.
std::vector<double> backward(const ModelState& model, const ForwardCache& cache, const Matrix& loss_grad);

} // namespace fedjam::nn
