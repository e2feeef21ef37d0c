#pragma once

#include "fedjam/signal/fft.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fedjam::signal {

enum class JammerKind : std::uint8_t { constant_tone, wideband_noise, pss_replay };

std::string_view to_string(JammerKind kind) noexcept;
/// Throws ConfigError on unknown names.
JammerKind parse_jammer_kind(std::string_view name);

struct JammerSpec {
    JammerKind kind = JammerKind::constant_tone;
    double jsr_db = 0.0;
    /// Normalized frequency in (-0.5, 0.5); constant_tone only.
    double tone_offset = 0.0;
    std::uint64_t seed = 0;
    /// Symbol length of the replayed PSS; pss_replay only.
    int replay_n_fft = 256;
};

struct ChannelSpec {
    /// Reserved snr_db value that disables additive noise.
    static constexpr double kNoiseOff = std::numeric_limits<double>::infinity();

    std::vector<cplx> taps{cplx{1.0, 0.0}};
    double snr_db = kNoiseOff;
    std::uint64_t seed = 0;
};

double mean_power(std::span<const cplx> x) noexcept;

/// Throws DomainError for empty taps, a zero leading tap, or a non-finite-and-not-off SNR.
void validate(const ChannelSpec& channel);
void validate(const JammerSpec& jammer);

/// Jammer waveform of length n scaled to unit mean power over the window.
std::vector<cplx> generate_jammer(const JammerSpec& jammer, std::size_t n);

/// Linear "same"-length FIR convolution (tail truncated).
std::vector<cplx> convolve_same(std::span<const cplx> x, std::span<const cplx> taps);

/// x = clean*h + w + j. Noise and jammer powers are calibrated exactly against
/// the post-channel signal power measured over the whole window.
std::vector<cplx> apply_impairments(std::span<const cplx> clean, const ChannelSpec& channel,
                                    const std::optional<JammerSpec>& jammer);

} // namespace fedjam::signal
