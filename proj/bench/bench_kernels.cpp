// Serial reference kernel against the OpenMP and transform kernels.

#include <benchmark/benchmark.h>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/families.hpp"
#include "acw/kernels.hpp"

using namespace acw;

namespace {

kernels::IntSeq sample(std::int64_t support, std::uint64_t seed) {
    SplitMix64 rng(seed);
    kernels::IntSeq s;
    std::uint64_t pos = 0;
    for (std::int64_t i = 0; i < support; ++i) {
        pos += 1 + rng.below(4);
        s.idx.push_back(pos);
        s.val.push_back(1 + static_cast<std::int64_t>(rng.below(3)));
    }
    return s;
}

template <kernels::IntSeq (*Kernel)(const kernels::IntSeq&, const kernels::IntSeq&, std::uint64_t)>
void BM_kernel(benchmark::State& state) {
    const auto f = sample(state.range(0), 1), g = sample(state.range(0), 2);
    const std::uint64_t len = f.idx.back() + g.idx.back() + 1;
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, g, len));
    state.SetComplexityN(state.range(0));
}

void BM_energy(benchmark::State& state, ConvolutionOptions::Method method) {
    const auto a = generate(FamilySpec::squares(state.range(0)));
    ConvolutionOptions o;
    o.method = method;
    for (auto _ : state) benchmark::DoNotOptimize(energy(a, o));
}

void BM_control_exhaustive_z16(benchmark::State& state) {
    const auto a = FiniteSet::cyclic(16, {0, 1, 3, 7, 12});
    for (auto _ : state) benchmark::DoNotOptimize(control_exhaustive(a));
}

}  // namespace

BENCHMARK(BM_kernel<kernels::naive_serial>)->Name("naive_serial")->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_kernel<kernels::naive_parallel>)->Name("naive_parallel")->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_kernel<kernels::ntt>)->Name("ntt")->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_energy, reference, ConvolutionOptions::Method::Reference)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_energy, accelerated, ConvolutionOptions::Method::Accelerated)->Arg(256)->Arg(1024);
BENCHMARK(BM_control_exhaustive_z16);

BENCHMARK_MAIN();
