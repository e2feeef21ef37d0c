#include "fedjam/signal/sequences.hpp"

#include "fedjam/error.hpp"

#include <cstdint>
#include <string>

namespace fedjam::signal {

namespace {

using Bits = std::array<std::uint8_t, kSyncSeqLen>;

// x(i+7) = (x(i+a) + x(i)) mod 2 from a 7-bit initial state.
Bits m_sequence(const std::array<std::uint8_t, 7>& init, std::size_t a)
{
    Bits x{};
    for (std::size_t i = 0; i < 7; ++i)
        x[i] = init[i];
    for (std::size_t i = 0; i + 7 < kSyncSeqLen; ++i)
        x[i + 7] = static_cast<std::uint8_t>((x[i + a] + x[i]) % 2);
    return x;
}

const Bits& pss_bits()
{
    static const Bits bits = m_sequence({0, 1, 1, 0, 1, 1, 1}, 4);
    return bits;
}

const Bits& sss_bits0()
{
    static const Bits bits = m_sequence({1, 0, 0, 0, 0, 0, 0}, 4);
    return bits;
}

const Bits& sss_bits1()
{
    static const Bits bits = m_sequence({1, 0, 0, 0, 0, 0, 0}, 1);
    return bits;
}

inline double bpsk(std::uint8_t bit) noexcept { return 1.0 - 2.0 * bit; }

} // namespace

CellIdentity derive_pci(int n1, int n2)
{
    if (n1 < 0 || n1 > kMaxCellGroup)
        throw DomainError("n1 out of range [0, 335]: " + std::to_string(n1));
    if (n2 < 0 || n2 > kMaxCellSector)
        throw DomainError("n2 out of range [0, 2]: " + std::to_string(n2));
    return CellIdentity{n1, n2, 3 * n1 + n2};
}

SyncSequence gen_pss(int n2)
{
    if (n2 < 0 || n2 > kMaxCellSector)
        throw DomainError("n2 out of range [0, 2]: " + std::to_string(n2));
    const Bits& x = pss_bits();
    SyncSequence d{};
    for (std::size_t i = 0; i < kSyncSeqLen; ++i)
        d[i] = bpsk(x[(i + 43 * static_cast<std::size_t>(n2)) % kSyncSeqLen]);
    return d;
}

SssShifts sss_shifts(const CellIdentity& cell) noexcept
{
    return SssShifts{15 * (cell.n1 / 112) + 5 * cell.n2, cell.n1 % 112};
}

SyncSequence gen_sss(const CellIdentity& cell)
{
    const CellIdentity checked = derive_pci(cell.n1, cell.n2);
    const auto [k0, k1] = sss_shifts(checked);
    const Bits& x0 = sss_bits0();
    const Bits& x1 = sss_bits1();
    SyncSequence d{};
    for (std::size_t i = 0; i < kSyncSeqLen; ++i)
        d[i] = bpsk(x0[(i + k0) % kSyncSeqLen]) * bpsk(x1[(i + k1) % kSyncSeqLen]);
    return d;
}

} // namespace fedjam::signal
