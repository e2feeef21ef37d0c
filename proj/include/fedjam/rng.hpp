#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedjam {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a base seed and a tag path,
/// e.g. derive_seed(master, {round, client_id}).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept;

} // namespace fedjam
