#include "fedjam/pipeline/stages.hpp"

#include "fedjam/error.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <string>

namespace fedjam::pipeline {

namespace {
enum SeedTag : std::uint64_t { kStage1 = 1, kStage2 = 2, kCaeInit = 3, kBaselineInit = 4, kBaseline = 5, kHead = 6 };
}

StageConfig StageConfig::desk()
{
    StageConfig c;
    c.encoder = {128, 64, 32};
    c.decoder = {32, 64, 128};
    c.head = {256, 128, 64, 1};
    return c;
}

void validate(const StageConfig& cfg)
{
    auto positive = [](const std::vector<std::size_t>& w, const char* name) {
        if (w.empty() || std::find(w.begin(), w.end(), std::size_t{0}) != w.end())
            throw ConfigError(std::string("stages.") + name + ": widths must be non-empty and positive");
    };
    positive(cfg.encoder, "encoder");
    positive(cfg.decoder, "decoder");
    positive(cfg.head, "head");
    if (cfg.head.back() != 1)
        throw ConfigError("stages.head: last width must be 1 (sigmoid output)");
    if (!(cfg.cae_dropout >= 0.0 && cfg.cae_dropout < 1.0) || !(cfg.head_dropout >= 0.0 && cfg.head_dropout < 1.0))
        throw ConfigError("stages: dropout rates must lie in [0, 1)");
    for (const TrainStageConfig* s : {&cfg.stage1, &cfg.stage2})
        if (s->rounds == 0 || s->batch_size == 0 || s->local_epochs == 0 || !(s->optimizer.lr > 0.0) || !(s->mu >= 0.0))
            throw ConfigError("stages: rounds, batch_size, local_epochs and lr must be positive, mu >= 0");
}

std::vector<nn::LayerSpec> encoder_layers(std::size_t input_dim, const StageConfig& cfg, bool frozen)
{
    std::vector<nn::LayerSpec> layers;
    std::size_t prev = input_dim;
    for (std::size_t w : cfg.encoder) {
        layers.push_back(nn::LayerSpec::dense(prev, w, frozen));
        layers.push_back(nn::LayerSpec::relu(w));
        layers.push_back(nn::LayerSpec::dropout(w, cfg.cae_dropout));
        prev = w;
    }
    return layers;
}

std::vector<nn::LayerSpec> cae_layers(std::size_t input_dim, const StageConfig& cfg)
{
    validate(cfg);
    std::vector<nn::LayerSpec> layers = encoder_layers(input_dim, cfg, false);
    std::size_t prev = cfg.encoder.back();
    for (std::size_t w : cfg.decoder) {
        layers.push_back(nn::LayerSpec::dense(prev, w));
        layers.push_back(nn::LayerSpec::relu(w));
        layers.push_back(nn::LayerSpec::dropout(w, cfg.cae_dropout));
        prev = w;
    }
    layers.push_back(nn::LayerSpec::dense(prev, input_dim));
    return layers;
}

std::vector<nn::LayerSpec> classifier_layers(std::size_t input_dim, const StageConfig& cfg, bool freeze_encoder)
{
    validate(cfg);
    std::vector<nn::LayerSpec> layers = encoder_layers(input_dim, cfg, freeze_encoder);
    std::size_t prev = cfg.encoder.back();
    for (std::size_t i = 0; i < cfg.head.size(); ++i) {
        const std::size_t w = cfg.head[i];
        layers.push_back(nn::LayerSpec::dense(prev, w));
        if (i + 1 < cfg.head.size()) {
            layers.push_back(nn::LayerSpec::relu(w));
            layers.push_back(nn::LayerSpec::dropout(w, cfg.head_dropout));
        } else {
            layers.push_back(nn::LayerSpec::sigmoid(w));
        }
        prev = w;
    }
    return layers;
}

fl::FederationConfig stage_federation(const fl::FederationConfig& base, const TrainStageConfig& stage,
                                      std::uint64_t stage_tag)
{
    fl::FederationConfig f = base;
    f.rounds = stage.rounds;
    f.batch_size = stage.batch_size;
    f.local_epochs = stage.local_epochs;
    f.optimizer = stage.optimizer;
    f.mu = stage.mu;
    f.seed = derive_seed(base.seed, {stage_tag});
    return f;
}

namespace {

std::size_t common_input_dim(std::span<const fl::ClientData> clients)
{
    if (clients.empty())
        throw ConfigError("pipeline: no clients");
    const std::size_t d = clients.front().train_x.cols;
    for (const auto& c : clients)
        if (c.train_x.cols != d)
            throw ShapeError("pipeline: clients disagree on input dimension");
    return d;
}

} // namespace

StageResult run_stage1(std::span<const fl::ClientData> clients, const StageConfig& cfg,
                       const fl::FederationConfig& federation)
{
    const std::size_t d = common_input_dim(clients);
    const nn::ModelState cae = nn::ModelState::initialized(cae_layers(d, cfg), derive_seed(federation.seed, {kCaeInit}));
    const fl::FederationConfig f = stage_federation(federation, cfg.stage1, kStage1);
    fl::FederationResult r = fl::run_rounds(f, clients, cae, fl::LossKind::mse, fl::Algorithm::fedavg);
    StageResult out{cae, std::move(r.history)};
    nn::load_params(out.model, r.params);
    out.model.set_mode(nn::Mode::eval);
    return out;
}

nn::ModelState build_classifier(const nn::ModelState& cae, const StageConfig& cfg, std::uint64_t seed)
{
    const std::size_t d = cae.input_dim();
    const auto expected = cae_layers(d, cfg);
    const auto& actual = cae.layers();
    // Rates are compared at float precision since checkpoints store them as f32.
    const bool same = actual.size() == expected.size() &&
                      std::equal(actual.begin(), actual.end(), expected.begin(), [](const auto& a, const auto& b) {
                          return a.kind == b.kind && a.in_dim == b.in_dim && a.out_dim == b.out_dim &&
                                 static_cast<float>(a.rate) == static_cast<float>(b.rate);
                      });
    if (!same)
        throw ConfigError("build_classifier: autoencoder layer specs do not match the configured widths");
    nn::ModelState clf = nn::ModelState::initialized(classifier_layers(d, cfg, true), derive_seed(seed, {kHead}));
    // Encoder dense layers lead both models, so their parameters share a prefix.
    std::size_t encoder_params = 0;
    for (const nn::ParamSlice& s : clf.slices())
        if (s.frozen)
            encoder_params = s.offset + s.size();
    auto dst = clf.mutable_params();
    std::copy_n(cae.params().begin(), encoder_params, dst.begin());
    clf.set_mode(nn::Mode::eval);
    return clf;
}

StageResult run_stage2(std::span<const fl::ClientData> clients, const nn::ModelState& classifier,
                       const StageConfig& cfg, const fl::FederationConfig& federation)
{
    const std::size_t d = common_input_dim(clients);
    if (classifier.input_dim() != d)
        throw ShapeError("run_stage2: classifier input dim does not match client data");
    for (const auto& c : clients)
        if (c.train_y.size() != c.train_x.rows || c.valid_y.size() != c.valid_x.rows)
            throw DomainError("run_stage2: client " + std::to_string(c.client_id) + " is missing labels");
    const fl::FederationConfig f = stage_federation(federation, cfg.stage2, kStage2);
    fl::FederationResult r = fl::run_rounds(f, clients, classifier, fl::LossKind::bce, fl::Algorithm::fedprox);
    StageResult out{classifier, std::move(r.history)};
    nn::load_params(out.model, r.params);
    out.model.set_mode(nn::Mode::eval);
    return out;
}

StageResult run_baseline(std::span<const fl::ClientData> clients, const StageConfig& cfg,
                         const fl::FederationConfig& federation, fl::Algorithm algorithm)
{
    const std::size_t d = common_input_dim(clients);
    const nn::ModelState model = nn::ModelState::initialized(classifier_layers(d, cfg, false),
                                                             derive_seed(federation.seed, {kBaselineInit}));
    TrainStageConfig stage = cfg.stage2;
    if (algorithm == fl::Algorithm::fedavg) {
        stage.optimizer.kind = nn::OptimizerKind::sgd;
        stage.mu = 0.0;
    }
    const fl::FederationConfig f = stage_federation(federation, stage, kBaseline);
    fl::FederationResult r = fl::run_rounds(f, clients, model, fl::LossKind::bce, algorithm);
    StageResult out{model, std::move(r.history)};
    nn::load_params(out.model, r.params);
    out.model.set_mode(nn::Mode::eval);
    return out;
}

std::vector<double> smooth(std::span<const double> values, std::size_t window)
{
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        double s = 0.0;
        for (std::size_t j = lo; j <= i; ++j)
            s += values[j];
        out[i] = s / static_cast<double>(i - lo + 1);
    }
    return out;
}

} // namespace fedjam::pipeline
