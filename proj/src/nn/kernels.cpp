#include "fedjam/nn/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace fedjam::nn::kernels {

namespace {

constexpr std::size_t kLanes = 8;
constexpr std::size_t kRowBlock = 4;
constexpr std::size_t kParallelWork = 1 << 15;

inline double lane_sum(const double* a) noexcept
{
    return ((a[0] + a[1]) + (a[2] + a[3])) + ((a[4] + a[5]) + (a[6] + a[7]));
}

// RB x RJ tile of dot products between x rows and w rows. Every output keeps
// its own lane accumulators, so its value does not depend on the tiling.
template <std::size_t RB, std::size_t RJ>
inline void dot_tile(const double* __restrict x, const double* __restrict w, std::size_t in,
                     double (&res)[RB][RJ]) noexcept
{
    double acc[RB][RJ][kLanes] = {};
    std::size_t k = 0;
    for (; k + kLanes <= in; k += kLanes)
        for (std::size_t r = 0; r < RB; ++r)
            for (std::size_t c = 0; c < RJ; ++c) {
                const double* xr = x + r * in + k;
                const double* wc = w + c * in + k;
#pragma omp simd
                for (std::size_t u = 0; u < kLanes; ++u)
                    acc[r][c][u] += xr[u] * wc[u];
            }
    for (std::size_t r = 0; r < RB; ++r)
        for (std::size_t c = 0; c < RJ; ++c) {
            double s = lane_sum(acc[r][c]);
            for (std::size_t t = k; t < in; ++t)
                s += x[r * in + t] * w[c * in + t];
            res[r][c] = s;
        }
}

template <std::size_t RJ>
inline void forward_cols(const double* x, std::size_t batch, std::size_t in, const double* w, const double* bias,
                         std::size_t out, std::size_t j0, double* y) noexcept
{
    std::size_t b = 0;
    for (; b + kRowBlock <= batch; b += kRowBlock) {
        double res[kRowBlock][RJ];
        dot_tile<kRowBlock, RJ>(x + b * in, w + j0 * in, in, res);
        for (std::size_t r = 0; r < kRowBlock; ++r)
            for (std::size_t c = 0; c < RJ; ++c)
                y[(b + r) * out + j0 + c] = res[r][c] + bias[j0 + c];
    }
    for (; b < batch; ++b) {
        double res[1][RJ];
        dot_tile<1, RJ>(x + b * in, w + j0 * in, in, res);
        for (std::size_t c = 0; c < RJ; ++c)
            y[b * out + j0 + c] = res[0][c] + bias[j0 + c];
    }
}

} // namespace

void dense_forward(std::span<const double> x, std::size_t batch, std::size_t in, std::span<const double> w,
                   std::span<const double> bias, std::size_t out, std::span<double> y)
{
    const std::size_t full = out / kRowBlock;
    const auto n_blocks = static_cast<std::int64_t>(full + (out % kRowBlock ? out % kRowBlock : 0));
    const bool parallel = batch * in * out > kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t jbs = 0; jbs < n_blocks; ++jbs) {
        const auto jb = static_cast<std::size_t>(jbs);
        if (jb < full)
            forward_cols<kRowBlock>(x.data(), batch, in, w.data(), bias.data(), out, jb * kRowBlock, y.data());
        else
            forward_cols<1>(x.data(), batch, in, w.data(), bias.data(), out, full * kRowBlock + (jb - full),
                            y.data());
    }
}

void dense_grad_params(std::span<const double> dy, std::span<const double> x, std::size_t batch, std::size_t in,
                       std::size_t out, std::span<double> dw, std::span<double> db)
{
    const auto n_blocks = static_cast<std::int64_t>((out + kRowBlock - 1) / kRowBlock);
    const bool parallel = batch * in * out > kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t jbs = 0; jbs < n_blocks; ++jbs) {
        const std::size_t j0 = static_cast<std::size_t>(jbs) * kRowBlock;
        const std::size_t nj = std::min(kRowBlock, out - j0);
        for (std::size_t r = 0; r < nj; ++r) {
            std::fill_n(dw.data() + (j0 + r) * in, in, 0.0);
            double acc = 0.0;
            for (std::size_t b = 0; b < batch; ++b)
                acc += dy[b * out + j0 + r];
            db[j0 + r] = acc;
        }
        for (std::size_t b = 0; b < batch; ++b) {
            const double* xb = x.data() + b * in;
            if (nj == kRowBlock) {
                const double d0 = dy[b * out + j0], d1 = dy[b * out + j0 + 1];
                const double d2 = dy[b * out + j0 + 2], d3 = dy[b * out + j0 + 3];
                double* w0 = dw.data() + j0 * in;
                double* w1 = w0 + in;
                double* w2 = w1 + in;
                double* w3 = w2 + in;
                for (std::size_t k = 0; k < in; ++k) {
                    const double xv = xb[k];
                    w0[k] += d0 * xv;
                    w1[k] += d1 * xv;
                    w2[k] += d2 * xv;
                    w3[k] += d3 * xv;
                }
            } else {
                for (std::size_t r = 0; r < nj; ++r) {
                    const double d = dy[b * out + j0 + r];
                    double* wr = dw.data() + (j0 + r) * in;
                    for (std::size_t k = 0; k < in; ++k)
                        wr[k] += d * xb[k];
                }
            }
        }
    }
}

void dense_grad_input(std::span<const double> dy, std::span<const double> w, std::size_t batch, std::size_t in,
                      std::size_t out, std::span<double> dx)
{
    const auto n_blocks = static_cast<std::int64_t>((batch + kRowBlock - 1) / kRowBlock);
    const bool parallel = batch * in * out > kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t bbs = 0; bbs < n_blocks; ++bbs) {
        const std::size_t b0 = static_cast<std::size_t>(bbs) * kRowBlock;
        const std::size_t nb = std::min(kRowBlock, batch - b0);
        std::fill_n(dx.data() + b0 * in, nb * in, 0.0);
        for (std::size_t j = 0; j < out; ++j) {
            const double* wj = w.data() + j * in;
            if (nb == kRowBlock) {
                const double d0 = dy[b0 * out + j], d1 = dy[(b0 + 1) * out + j];
                const double d2 = dy[(b0 + 2) * out + j], d3 = dy[(b0 + 3) * out + j];
                double* x0 = dx.data() + b0 * in;
                double* x1 = x0 + in;
                double* x2 = x1 + in;
                double* x3 = x2 + in;
                for (std::size_t k = 0; k < in; ++k) {
                    const double wv = wj[k];
                    x0[k] += d0 * wv;
                    x1[k] += d1 * wv;
                    x2[k] += d2 * wv;
                    x3[k] += d3 * wv;
                }
            } else {
                for (std::size_t r = 0; r < nb; ++r) {
                    const double d = dy[(b0 + r) * out + j];
                    double* xr = dx.data() + (b0 + r) * in;
                    for (std::size_t k = 0; k < in; ++k)
                        xr[k] += d * wj[k];
                }
            }
        }
    }
}

} // namespace fedjam::nn::kernels
