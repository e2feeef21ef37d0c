#pragma once

#include <complex>
#include <span>

namespace fedjam::signal {

using cplx = std::complex<double>;

enum class FftDirection { forward, inverse };

/// Unnormalized in-place DFT: forward uses e^{-j2πkm/N}, inverse e^{+j2πkm/N}.
/// Plans are cached per (size, direction); safe to call from any thread.
void dft_inplace(std::span<cplx> data, FftDirection dir);

} // namespace fedjam::signal
