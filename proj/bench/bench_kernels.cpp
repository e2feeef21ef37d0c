#include "fedjam/nn/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace fedjam::nn;

struct Shape {
    std::vector<double> x, w, b, y, dy, dw, db, dx;
    std::size_t batch, in, out;

    Shape(std::size_t batch_, std::size_t in_, std::size_t out_) : batch(batch_), in(in_), out(out_)
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> n;
        auto fill = [&](std::vector<double>& v, std::size_t size) {
            v.resize(size);
            for (double& e : v)
                e = n(rng);
        };
        fill(x, batch * in);
        fill(w, in * out);
        fill(b, out);
        fill(dy, batch * out);
        y.resize(batch * out);
        dw.resize(in * out);
        db.resize(out);
        dx.resize(batch * in);
    }
};

void set_flops(benchmark::State& state, const Shape& s)
{
    state.counters["GFLOP/s"] =
        benchmark::Counter(2.0 * s.batch * s.in * s.out, benchmark::Counter::kIsIterationInvariantRate,
                           benchmark::Counter::kIs1000);
}

template <bool Reference>
void BM_forward(benchmark::State& state)
{
    Shape s(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) {
        if constexpr (Reference)
            kernels::reference::dense_forward(s.x, s.batch, s.in, s.w, s.b, s.out, s.y);
        else
            kernels::dense_forward(s.x, s.batch, s.in, s.w, s.b, s.out, s.y);
        benchmark::DoNotOptimize(s.y.data());
    }
    set_flops(state, s);
}

template <bool Reference>
void BM_grad_params(benchmark::State& state)
{
    Shape s(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) {
        if constexpr (Reference)
            kernels::reference::dense_grad_params(s.dy, s.x, s.batch, s.in, s.out, s.dw, s.db);
        else
            kernels::dense_grad_params(s.dy, s.x, s.batch, s.in, s.out, s.dw, s.db);
        benchmark::DoNotOptimize(s.dw.data());
    }
    set_flops(state, s);
}

template <bool Reference>
void BM_grad_input(benchmark::State& state)
{
    Shape s(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) {
        if constexpr (Reference)
            kernels::reference::dense_grad_input(s.dy, s.w, s.batch, s.in, s.out, s.dx);
        else
            kernels::dense_grad_input(s.dy, s.w, s.batch, s.in, s.out, s.dx);
        benchmark::DoNotOptimize(s.dx.data());
    }
    set_flops(state, s);
}

// Desk-scale first encoder layer, full-size first layer, and a small head layer.
void shapes(benchmark::internal::Benchmark* b)
{
    b->Args({64, 2048, 128})->Args({256, 2048, 128})->Args({64, 2048, 512})->Args({200, 32, 256});
}

} // namespace

BENCHMARK(BM_forward<true>)->Name("forward/reference")->Apply(shapes);
BENCHMARK(BM_forward<false>)->Name("forward/openmp")->Apply(shapes);
BENCHMARK(BM_grad_params<true>)->Name("grad_params/reference")->Apply(shapes);
BENCHMARK(BM_grad_params<false>)->Name("grad_params/openmp")->Apply(shapes);
BENCHMARK(BM_grad_input<true>)->Name("grad_input/reference")->Apply(shapes);
BENCHMARK(BM_grad_input<false>)->Name("grad_input/openmp")->Apply(shapes);

BENCHMARK_MAIN();
