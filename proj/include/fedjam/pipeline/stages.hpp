#pragma once

#include "fedjam/fl/federation.hpp"
#include "fedjam/nn/model.hpp"
#include "fedjam/nn/optim.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fedjam::pipeline {

struct TrainStageConfig {
    std::size_t rounds = 1;
    std::size_t batch_size = 64;
    nn::OptimizerConfig optimizer{};
    double mu = 0.0;
    std::size_t local_epochs = 1;
};

/// Two-stage hyperparameters. Defaults are the full-size architecture; desk()
/// scales widths down for CPU-minute runs.
struct StageConfig {
    TrainStageConfig stage1{15, 64, {nn::OptimizerKind::sgd, 0.001}, 0.0, 1};
    TrainStageConfig stage2{30, 200, {nn::OptimizerKind::adam, 0.001}, 0.01, 1};
    std::vector<std::size_t> encoder{512, 256, 128};
    std::vector<std::size_t> decoder{128, 256, 512};
    std::vector<std::size_t> head{1024, 512, 256, 1};
    double cae_dropout = 0.2;
    double head_dropout = 0.5;

    static StageConfig desk();
};

void validate(const StageConfig& cfg);

/// Encoder block: dense -> relu -> dropout per width.
std::vector<nn::LayerSpec> encoder_layers(std::size_t input_dim, const StageConfig& cfg, bool frozen);
/// Encoder, decoder blocks, then a linear dense back to input_dim.
std::vector<nn::LayerSpec> cae_layers(std::size_t input_dim, const StageConfig& cfg);
/// Encoder followed by the head: hidden dense -> relu -> dropout, final dense -> sigmoid.
std::vector<nn::LayerSpec> classifier_layers(std::size_t input_dim, const StageConfig& cfg, bool freeze_encoder);

struct StageResult {
    nn::ModelState model;
    std::vector<fl::RoundRecord> history;
};

/// Federation settings for one stage: participation, seed and threads come
/// from `base`; rounds, batch, epochs, optimizer and mu from `stage`.
fl::FederationConfig stage_federation(const fl::FederationConfig& base, const TrainStageConfig& stage,
                                      std::uint64_t stage_tag);

/// FedAVG + MSE reconstruction training of a freshly initialized autoencoder.
StageResult run_stage1(std::span<const fl::ClientData> clients, const StageConfig& cfg,
                       const fl::FederationConfig& federation);

/// Copies and freezes the encoder of `cae`, grafting a freshly initialized head.
/// Throws ConfigError when `cae` does not match cfg's autoencoder layout.
nn::ModelState build_classifier(const nn::ModelState& cae, const StageConfig& cfg, std::uint64_t seed);

/// FedProx + BCE training of the classifier head.
StageResult run_stage2(std::span<const fl::ClientData> clients, const nn::ModelState& classifier,
                       const StageConfig& cfg, const fl::FederationConfig& federation);

/// Single-stage end-to-end classifier (encoder trainable) with the named aggregator;
/// fedavg uses an SGD local solver, fedprox Adam with the stage-2 mu.
StageResult run_baseline(std::span<const fl::ClientData> clients, const StageConfig& cfg,
                         const fl::FederationConfig& federation, fl::Algorithm algorithm);

/// Trailing moving average over `window` rounds.
std::vector<double> smooth(std::span<const double> values, std::size_t window);

} // namespace fedjam::pipeline
