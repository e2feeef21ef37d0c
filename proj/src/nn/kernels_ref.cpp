#include "fedjam/nn/kernels.hpp"

namespace fedjam::nn::kernels::reference {

void dense_forward(std::span<const double> x, std::size_t batch, std::size_t in, std::span<const double> w,
                   std::span<const double> bias, std::size_t out, std::span<double> y)
{
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t j = 0; j < out; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < in; ++k)
                acc += x[b * in + k] * w[j * in + k];
            y[b * out + j] = acc + bias[j];
        }
}

void dense_grad_params(std::span<const double> dy, std::span<const double> x, std::size_t batch, std::size_t in,
                       std::size_t out, std::span<double> dw, std::span<double> db)
{
    for (std::size_t j = 0; j < out; ++j) {
        double bacc = 0.0;
        for (std::size_t b = 0; b < batch; ++b)
            bacc += dy[b * out + j];
        db[j] = bacc;
        for (std::size_t k = 0; k < in; ++k) {
            double acc = 0.0;
            for (std::size_t b = 0; b < batch; ++b)
                acc += dy[b * out + j] * x[b * in + k];
            dw[j * in + k] = acc;
        }
    }
}

void dense_grad_input(std::span<const double> dy, std::span<const double> w, std::size_t batch, std::size_t in,
                      std::size_t out, std::span<double> dx)
{
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t k = 0; k < in; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < out; ++j)
                acc += dy[b * out + j] * w[j * in + k];
            dx[b * in + k] = acc;
        }
}

} // namespace fedjam::nn::kernels::reference
