#include "fedjam/signal/dataset.hpp"

#include "fedjam/error.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fedjam::signal {

namespace {
enum StreamTag : std::uint64_t { kPbch = 1, kNoise = 2, kJammer = 3, kShuffle = 4 };
}

SplitCounts split_counts(std::uint32_t n_obs, const SplitFractions& split)
{
    SplitCounts c;
    c.train = static_cast<std::uint32_t>(std::lround(split.train * n_obs));
    c.valid = static_cast<std::uint32_t>(std::lround(split.valid * n_obs));
    if (c.train + c.valid > n_obs)
        c.valid = n_obs - c.train;
    c.test = n_obs - c.train - c.valid;
    return c;
}

void validate(const ClientProfile& profile)
{
    derive_pci(profile.cell.n1, profile.cell.n2);
    validate(profile.channel);
    validate(profile.jammer);
    validate_fft_size(profile.n_fft);
    if (profile.cp_len < 0 || profile.cp_len >= profile.n_fft)
        throw DomainError("cp_len must lie in [0, n_fft)");
    if (profile.n_obs == 0 || profile.n_obs % 2 != 0)
        throw DomainError("n_obs must be positive and even, got " + std::to_string(profile.n_obs));
    const auto& s = profile.split;
    if (!(s.train > 0 && s.valid > 0 && s.test > 0) || std::abs(s.train + s.valid + s.test - 1.0) > 1e-9)
        throw DomainError("split fractions must be positive and sum to 1");
}

std::uint32_t window_length(const ClientProfile& profile) noexcept
{
    if (profile.q_len != 0)
        return profile.q_len;
    return static_cast<std::uint32_t>(kSsbSymbols * (profile.n_fft + profile.cp_len));
}

std::vector<std::size_t> ClientDataset::indices(SplitTag tag) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == tag)
            out.push_back(i);
    return out;
}

std::vector<cplx> synth_observation(const ClientProfile& profile, std::uint32_t index, Label label)
{
    const std::uint64_t base = derive_seed(profile.seed, {profile.client_id, index});
    const SsbGrid grid = build_ssb_grid(profile.cell, profile.n_fft, profile.pbch_fill, derive_seed(base, {kPbch}));
    std::vector<cplx> clean = ofdm_modulate(grid, profile.cp_len);
    // Windows longer than the block see channel noise/jammer only past its end.
    clean.resize(window_length(profile), cplx{});

    ChannelSpec channel = profile.channel;
    channel.seed = derive_seed(base, {kNoise, profile.channel.seed});
    if (label == Label::pure)
        return apply_impairments(clean, channel, std::nullopt);
    JammerSpec jammer = profile.jammer;
    jammer.seed = derive_seed(base, {kJammer, profile.jammer.seed});
    return apply_impairments(clean, channel, jammer);
}

ClientDataset synth_client_dataset(const ClientProfile& profile)
{
    validate(profile);
    const std::uint32_t n = profile.n_obs;
    const std::uint32_t q = window_length(profile);

    std::vector<SsbObservation> generated(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::uint32_t>(i);
        const Label label = idx < n / 2 ? Label::pure : Label::jammed;
        const std::vector<cplx> x = synth_observation(profile, idx, label);
        SsbObservation& obs = generated[static_cast<std::size_t>(i)];
        obs.label = label;
        obs.iq.resize(q);
        for (std::size_t j = 0; j < q; ++j)
            obs.iq[j] = std::complex<float>(static_cast<float>(x[j].real()), static_cast<float>(x[j].imag()));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(profile.seed, {profile.client_id, kShuffle}));
    std::shuffle(order.begin(), order.end(), rng);

    ClientDataset ds;
    ds.client_id = profile.client_id;
    ds.femtocell_id = profile.femtocell_id;
    ds.q_len = q;
    ds.counts = split_counts(n, profile.split);
    ds.observations.reserve(n);
    ds.tags.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ds.observations.push_back(std::move(generated[order[i]]));
        SplitTag tag = SplitTag::test;
        if (i < ds.counts.train)
            tag = SplitTag::train;
        else if (i < ds.counts.train + ds.counts.valid)
            tag = SplitTag::valid;
        ds.tags.push_back(tag);
    }
    return ds;
}

} // namespace fedjam::signal
