#pragma once

#include "fedjam/fl/federation.hpp"
#include "fedjam/pipeline/stages.hpp"
#include "fedjam/signal/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fedjam::io {

struct SignalSettings {
    int n_fft = 256;
    int cp_len = 0;
    std::uint32_t q_len = 0;
    signal::PbchFill pbch_fill = signal::PbchFill::random_qpsk;
};

/// Heterogeneity ranges for generated client profiles.
struct GeneratorSettings {
    std::size_t n_clients = 6;
    std::size_t n_femtocells = 3;
    std::uint32_t n_obs = 600;
    signal::SplitFractions split{};
    std::pair<double, double> snr_db{5.0, 20.0};
    std::pair<double, double> jsr_db{5.0, 15.0};
    std::vector<signal::JammerKind> jammer_kinds{signal::JammerKind::constant_tone, signal::JammerKind::wideband_noise};
    std::pair<int, int> n_taps{1, 3};
    std::pair<double, double> tone_offset{-0.4, 0.4};
};

struct ExperimentConfig {
    std::uint64_t master_seed = 0;
    SignalSettings signal{};
    std::optional<GeneratorSettings> generator;
    /// Explicit or generated; always resolved after parsing.
    std::vector<signal::ClientProfile> clients;
    pipeline::StageConfig stages = pipeline::StageConfig::desk();
    /// Participation and sampling; stage fields override rounds/batch/optimizer.
    fl::FederationConfig federation{};
    double threshold = 0.5;
    std::vector<double> grid_fractions{1.0, 0.5};
    std::string output_dir;
    std::string data_dir;
};

/// Deterministic profiles drawn from the generator ranges.
std::vector<signal::ClientProfile> generate_profiles(const GeneratorSettings& gen, const SignalSettings& sig,
                                                     std::uint64_t master_seed);

/// Parses and validates a JSON experiment config. Unknown keys are rejected;
/// errors are ConfigError naming the offending field (or line/column for syntax).
ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

} // namespace fedjam::io
