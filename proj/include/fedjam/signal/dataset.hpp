#pragma once

#include "fedjam/signal/impairments.hpp"
#include "fedjam/signal/sequences.hpp"
#include "fedjam/signal/ssb.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace fedjam::signal {

enum class Label : std::uint8_t { pure = 0, jammed = 1 };
enum class SplitTag : std::uint8_t { train = 0, valid = 1, test = 2 };

struct SsbObservation {
    std::vector<std::complex<float>> iq;
    Label label = Label::pure;

    friend bool operator==(const SsbObservation&, const SsbObservation&) = default;
};

struct SplitFractions {
    double train = 0.72;
    double valid = 0.08;
    double test = 0.20;
};

struct SplitCounts {
    std::uint32_t train = 0;
    std::uint32_t valid = 0;
    std::uint32_t test = 0;

    friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

/// Rounds train/valid to the nearest count; test takes the remainder.
SplitCounts split_counts(std::uint32_t n_obs, const SplitFractions& split);

struct ClientProfile {
    std::uint32_t client_id = 0;
    std::uint32_t femtocell_id = 1;
    CellIdentity cell{};
    ChannelSpec channel{};
    JammerSpec jammer{};
    std::uint32_t n_obs = 0;
    SplitFractions split{};
    int n_fft = 256;
    int cp_len = 0;
    /// IQ window length; 0 selects the full block, 4*(n_fft+cp_len).
    std::uint32_t q_len = 0;
    PbchFill pbch_fill = PbchFill::random_qpsk;
    std::uint64_t seed = 0;
};

/// Throws DomainError/ConfigError for an inconsistent profile.
void validate(const ClientProfile& profile);

std::uint32_t window_length(const ClientProfile& profile) noexcept;

struct ClientDataset {
    std::uint32_t client_id = 0;
    std::uint32_t femtocell_id = 0;
    std::uint32_t q_len = 0;
    SplitCounts counts{};
    /// Deterministically shuffled; the first counts.train are train, then valid, then test.
    std::vector<SsbObservation> observations;
    std::vector<SplitTag> tags;

    std::vector<std::size_t> indices(SplitTag tag) const;

    friend bool operator==(const ClientDataset&, const ClientDataset&) = default;
};

/// One received observation: fresh PBCH, noise and (for H1) jammer streams
/// derived from the profile seed and the observation index.
std::vector<cplx> synth_observation(const ClientProfile& profile, std::uint32_t index, Label label);

/// Balanced H0/H1 dataset. Observations are generated in parallel; the
/// output depends only on the profile.
ClientDataset synth_client_dataset(const ClientProfile& profile);

} // namespace fedjam::signal
