#include "fedjam/signal/impairments.hpp"

#include "fedjam/error.hpp"
#include "fedjam/rng.hpp"
#include "fedjam/signal/ssb.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace fedjam::signal {

std::string_view to_string(JammerKind kind) noexcept
{
    switch (kind) {
    case JammerKind::constant_tone:
        return "constant_tone";
    case JammerKind::wideband_noise:
        return "wideband_noise";
    case JammerKind::pss_replay:
        return "pss_replay";
    }
    return "unknown";
}

JammerKind parse_jammer_kind(std::string_view name)
{
    if (name == "constant_tone")
        return JammerKind::constant_tone;
    if (name == "wideband_noise")
        return JammerKind::wideband_noise;
    if (name == "pss_replay")
        return JammerKind::pss_replay;
    throw ConfigError("unknown jammer kind '" + std::string(name) + "'");
}

double mean_power(std::span<const cplx> x) noexcept
{
    if (x.empty())
        return 0.0;
    double acc = 0.0;
    for (const cplx& v : x)
        acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

void validate(const ChannelSpec& channel)
{
    if (channel.taps.empty())
        throw DomainError("channel taps must be non-empty");
    if (channel.taps.front() == cplx{})
        throw DomainError("channel tap 0 must be nonzero");
    if (std::isnan(channel.snr_db) || channel.snr_db == -std::numeric_limits<double>::infinity())
        throw DomainError("snr_db must be finite or the noise-off sentinel");
}

void validate(const JammerSpec& jammer)
{
    if (!std::isfinite(jammer.jsr_db))
        throw DomainError("jsr_db must be finite");
    if (jammer.kind == JammerKind::constant_tone && !(jammer.tone_offset > -0.5 && jammer.tone_offset < 0.5))
        throw DomainError("tone_offset must lie in (-0.5, 0.5), got " + std::to_string(jammer.tone_offset));
    if (jammer.kind == JammerKind::pss_replay)
        validate_fft_size(jammer.replay_n_fft);
}

namespace {

void scale_to_power(std::vector<cplx>& x, double target)
{
    const double p = mean_power(x);
    if (p <= 0.0)
        return;
    const double g = std::sqrt(target / p);
    for (cplx& v : x)
        v *= g;
}

std::vector<cplx> complex_gaussian(std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<cplx> out(n);
    for (cplx& v : out) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = cplx(re, im);
    }
    return out;
}

} // namespace

std::vector<cplx> generate_jammer(const JammerSpec& jammer, std::size_t n)
{
    validate(jammer);
    Rng rng(jammer.seed);
    std::vector<cplx> out;
    switch (jammer.kind) {
    case JammerKind::constant_tone: {
        const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::polar(1.0, 2.0 * std::numbers::pi * jammer.tone_offset * static_cast<double>(i) + phase);
        break;
    }
    case JammerKind::wideband_noise:
        out = complex_gaussian(n, rng);
        break;
    case JammerKind::pss_replay: {
        const int n2 = static_cast<int>(rng() % 3);
        const auto period = static_cast<std::size_t>(jammer.replay_n_fft);
        const std::size_t delay = rng() % period;
        const std::vector<cplx> wave = ofdm_modulate(build_pss_only_grid(n2, jammer.replay_n_fft), 0);
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = wave[(i + delay) % period];
        break;
    }
    }
    scale_to_power(out, 1.0);
    return out;
}

std::vector<cplx> convolve_same(std::span<const cplx> x, std::span<const cplx> taps)
{
    std::vector<cplx> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        cplx acc{};
        const std::size_t n_taps = std::min(taps.size(), i + 1);
        for (std::size_t t = 0; t < n_taps; ++t)
            acc += taps[t] * x[i - t];
        y[i] = acc;
    }
    return y;
}

std::vector<cplx> apply_impairments(std::span<const cplx> clean, const ChannelSpec& channel,
                                    const std::optional<JammerSpec>& jammer)
{
    if (clean.empty())
        throw DomainError("apply_impairments: clean signal is empty");
    validate(channel);
    std::vector<cplx> out = convolve_same(clean, channel.taps);
    const double signal_power = mean_power(out);

    if (channel.snr_db != ChannelSpec::kNoiseOff) {
        Rng rng(channel.seed);
        std::vector<cplx> noise = complex_gaussian(out.size(), rng);
        scale_to_power(noise, signal_power / std::pow(10.0, channel.snr_db / 10.0));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += noise[i];
    }
    if (jammer) {
        std::vector<cplx> jam = generate_jammer(*jammer, out.size());
        scale_to_power(jam, signal_power * std::pow(10.0, jammer->jsr_db / 10.0));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += jam[i];
    }
    return out;
}

} // namespace fedjam::signal
