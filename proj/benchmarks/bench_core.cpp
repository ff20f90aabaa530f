#include <benchmark/benchmark.h>

#include "germinate/germ.hpp"
#include "germinate/interp.hpp"
#include "germinate/zeros.hpp"

using namespace germinate;

static void bench_padic_mul(benchmark::State& state) {
    const auto q2 = FieldDesc::padic(2, static_cast<std::uint32_t>(state.range(0)));
    Rng rng(1, 0);
    const Value x = random_unit_nonzero(q2, rng);
    const Value y = random_unit_nonzero(q2, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(x.mul(y));
    }
}
BENCHMARK(bench_padic_mul)->Arg(16)->Arg(64)->Arg(256);

static void bench_padic_div(benchmark::State& state) {
    const auto q2 = FieldDesc::padic(2, static_cast<std::uint32_t>(state.range(0)));
    Rng rng(2, 0);
    const Value x = random_unit_nonzero(q2, rng);
    const Value y = random_unit_nonzero(q2, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(x.div(y));
    }
}
BENCHMARK(bench_padic_div)->Arg(16)->Arg(64)->Arg(256);

static void bench_counterexample_expand(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(counterexample_poly(n));
    }
}
BENCHMARK(bench_counterexample_expand)->Arg(5)->Arg(10)->Arg(20);

static void bench_tensor_interpolate_complex(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto cd = FieldDesc::complex_plane();
    const NodePlan axis = select_nodes_arch(n, 0.1, 0.99, 0.0);
    const NodePlan plans[] = {axis, axis};
    Rng rng(3, 0);
    const std::uint32_t per_axis[] = {n, n};
    const MultiPoly f = random_poly_box_degree(cd, 2, per_axis, rng);
    const std::size_t extents[] = {n + 1, n + 1};
    const TensorGrid g = evaluate_on_grid(f, plans, extents);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tensor_interpolate(g, plans));
    }
}
BENCHMARK(bench_tensor_interpolate_complex)->Arg(4)->Arg(8)->Arg(12);

static void bench_aberth_roots(benchmark::State& state) {
    const auto cd = FieldDesc::complex_plane();
    Rng rng(4, 0);
    MultiPoly f = MultiPoly::constant(cd, 1, Value::complex_value({1, 0}));
    for (long i = 0; i < state.range(0); ++i) {
        MultiPoly lin(cd, 1);
        lin.add_term(Exponents{1}, Value::one(cd));
        lin.add_term(Exponents{0},
                     Value::complex_value({2 * rng.uniform_signed(), 2 * rng.uniform_signed()}));
        f = f.mul(lin);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(smallest_root_modulus_arch(f));
    }
}
BENCHMARK(bench_aberth_roots)->Arg(4)->Arg(8)->Arg(16);

static void bench_binomial_reconstruction(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto q = FieldDesc::rational();
    const SliceOracle o = SliceOracle::geometric({Value::one(q), Value::one(q)}, n);
    const auto plans = default_axis_plans(q, 2, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_series(o, n, plans));
    }
}
BENCHMARK(bench_binomial_reconstruction)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
