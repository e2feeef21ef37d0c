#include "fedjam/signal/ssb.hpp"

#include "fedjam/error.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fedjam::signal {

bool is_pbch_element(int l, int k) noexcept
{
    if (k < 0 || k >= kSsbSubcarriers)
        return false;
    switch (l) {
    case 1:
    case 3:
        return true;
    case 2:
        return k < 48 || k >= 192;
    default:
        return false;
    }
}

void validate_fft_size(int n_fft)
{
    if (n_fft < kMinFftSize || (n_fft & (n_fft - 1)) != 0)
        throw ConfigError("n_fft must be a power of two >= 256 to hold the 240-subcarrier SSB, got " +
                          std::to_string(n_fft));
}

SsbGrid make_empty_grid(const CellIdentity& cell, int n_fft)
{
    validate_fft_size(n_fft);
    SsbGrid g;
    g.n_fft = n_fft;
    g.cell = cell;
    g.symbols.assign(static_cast<std::size_t>(kSsbSymbols) * n_fft, cplx{});
    return g;
}

SsbGrid build_ssb_grid(const CellIdentity& cell, int n_fft, PbchFill pbch_fill, std::uint64_t seed)
{
    SsbGrid g = make_empty_grid(cell, n_fft);
    const SyncSequence pss = gen_pss(cell.n2);
    const SyncSequence sss = gen_sss(cell);
    for (std::size_t i = 0; i < kSyncSeqLen; ++i) {
        g.at(kPssRow, kSyncFirstSubcarrier + static_cast<int>(i)) = pss[i];
        g.at(kSssRow, kSyncFirstSubcarrier + static_cast<int>(i)) = sss[i];
    }
    if (pbch_fill == PbchFill::random_qpsk) {
        Rng rng(seed);
        const double a = 1.0 / std::sqrt(2.0);
        for (int l = 0; l < kSsbSymbols; ++l)
            for (int k = 0; k < kSsbSubcarriers; ++k)
                if (is_pbch_element(l, k)) {
                    const std::uint64_t bits = rng();
                    g.at(l, k) = cplx((bits & 1) ? -a : a, (bits & 2) ? -a : a);
                }
    }
    return g;
}

SsbGrid build_pss_only_grid(int n2, int n_fft)
{
    SsbGrid g = make_empty_grid(derive_pci(0, n2), n_fft);
    const SyncSequence pss = gen_pss(n2);
    for (std::size_t i = 0; i < kSyncSeqLen; ++i)
        g.at(kPssRow, kSyncFirstSubcarrier + static_cast<int>(i)) = pss[i];
    return g;
}

std::vector<cplx> ofdm_modulate(const SsbGrid& grid, int cp_len)
{
    const int n = grid.n_fft;
    if (cp_len < 0 || cp_len >= n)
        throw DomainError("cp_len must lie in [0, n_fft), got " + std::to_string(cp_len));
    const auto sym_len = static_cast<std::size_t>(n + cp_len);
    std::vector<cplx> out(kSsbSymbols * sym_len);
    std::vector<cplx> buf(static_cast<std::size_t>(n));
    const double scale = 1.0 / n;
    for (int l = 0; l < kSsbSymbols; ++l) {
        auto src = grid.row(l);
        std::copy(src.begin(), src.end(), buf.begin());
        dft_inplace(buf, FftDirection::inverse);
        cplx* dst = out.data() + l * sym_len;
        for (int m = 0; m < cp_len; ++m)
            dst[m] = buf[static_cast<std::size_t>(n - cp_len + m)] * scale;
        for (int m = 0; m < n; ++m)
            dst[cp_len + m] = buf[static_cast<std::size_t>(m)] * scale;
    }
    return out;
}

SsbGrid ofdm_demodulate(std::span<const cplx> samples, int n_fft, int cp_len, const CellIdentity& cell)
{
    SsbGrid g = make_empty_grid(cell, n_fft);
    if (cp_len < 0 || cp_len >= n_fft)
        throw DomainError("cp_len must lie in [0, n_fft), got " + std::to_string(cp_len));
    const auto sym_len = static_cast<std::size_t>(n_fft + cp_len);
    if (samples.size() != kSsbSymbols * sym_len)
        throw ShapeError("ofdm_demodulate: expected " + std::to_string(kSsbSymbols * sym_len) + " samples, got " +
                         std::to_string(samples.size()));
    for (int l = 0; l < kSsbSymbols; ++l) {
        auto row = g.row(l);
        const cplx* src = samples.data() + l * sym_len + cp_len;
        std::copy(src, src + n_fft, row.begin());
        dft_inplace(row, FftDirection::forward);
    }
    return g;
}

} // namespace fedjam::signal
