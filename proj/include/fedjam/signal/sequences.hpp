#pragma once

#include <array>
#include <cstddef>

namespace fedjam::signal {

inline constexpr int kMaxCellGroup = 335;
inline constexpr int kMaxCellSector = 2;
inline constexpr std::size_t kSyncSeqLen = 127;

/// Physical cell identity: group n1 (0..335) and sector n2 (0..2).
struct CellIdentity {
    int n1 = 0;
    int n2 = 0;
    int pci = 0;

    friend bool operator==(const CellIdentity&, const CellIdentity&) = default;
};

/// Throws DomainError naming the offending field when out of range.
CellIdentity derive_pci(int n1, int n2);

using SyncSequence = std::array<double, kSyncSeqLen>;

/// BPSK primary synchronization sequence for sector n2.
SyncSequence gen_pss(int n2);

struct SssShifts {
    int k0 = 0;
    int k1 = 0;
};

SssShifts sss_shifts(const CellIdentity& cell) noexcept;

/// BPSK secondary synchronization sequence (product of two shifted m-sequences).
SyncSequence gen_sss(const CellIdentity& cell);

} // namespace fedjam::signal
