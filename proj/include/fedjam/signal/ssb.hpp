#pragma once

#include "fedjam/signal/fft.hpp"
#include "fedjam/signal/sequences.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fedjam::signal {

inline constexpr int kSsbSymbols = 4;
inline constexpr int kSsbSubcarriers = 240;
inline constexpr int kSyncFirstSubcarrier = 56;
inline constexpr int kSyncLastSubcarrier = 182;
inline constexpr int kPssRow = 0;
inline constexpr int kSssRow = 2;
inline constexpr int kMinFftSize = 256;

enum class PbchFill { zeros, random_qpsk };

/// Frequency-domain SSB: 4 OFDM symbols by n_fft subcarriers, row-major.
struct SsbGrid {
    int n_fft = 0;
    CellIdentity cell{};
    std::vector<cplx> symbols;

    cplx& at(int l, int k) { return symbols[static_cast<std::size_t>(l) * n_fft + k]; }
    const cplx& at(int l, int k) const { return symbols[static_cast<std::size_t>(l) * n_fft + k]; }

    std::span<cplx> row(int l) { return {symbols.data() + static_cast<std::size_t>(l) * n_fft, static_cast<std::size_t>(n_fft)}; }
    std::span<const cplx> row(int l) const
    {
        return {symbols.data() + static_cast<std::size_t>(l) * n_fft, static_cast<std::size_t>(n_fft)};
    }
};

/// True for resource elements that carry PBCH in the SSB layout.
bool is_pbch_element(int l, int k) noexcept;

/// Throws ConfigError unless n_fft is a power of two >= 256.
void validate_fft_size(int n_fft);

/// Empty grid (all zeros) with the right shape.
SsbGrid make_empty_grid(const CellIdentity& cell, int n_fft);

SsbGrid build_ssb_grid(const CellIdentity& cell, int n_fft, PbchFill pbch_fill, std::uint64_t seed);

/// Grid with only the PSS row populated (used by the replay jammer).
SsbGrid build_pss_only_grid(int n2, int n_fft);

/// Per-symbol scaled IDFT with cyclic prefix; output length 4*(n_fft+cp_len).
std::vector<cplx> ofdm_modulate(const SsbGrid& grid, int cp_len);

/// Inverse of ofdm_modulate: strips each cyclic prefix and applies the forward DFT.
SsbGrid ofdm_demodulate(std::span<const cplx> samples, int n_fft, int cp_len, const CellIdentity& cell);

} // namespace fedjam::signal
