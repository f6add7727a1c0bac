// Times the serial reference kernels against their OpenMP counterparts and
// checks that both produce identical bits. Build and run by hand:
//
//   cmake --build build --target bench_kernels && ./build/benchmarks/bench_kernels

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "boostctl/parallel.hpp"
#include "boostctl/rng.hpp"
#include "boostctl/tuning.hpp"

using namespace boostctl;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void bench_batch_gradient() {
    const Mlp net = Mlp::init({3, 256, 256, 256, 1}, Activation::Tanh, Activation::Identity, 7);
    const std::size_t n = 256;
    Rng rng(1);
    std::vector<double> inputs(n * 3);
    std::vector<double> targets(n);
    for (double& x : inputs) x = rng.uniform(-1.0, 1.0);
    for (double& t : targets) t = rng.uniform(-1.0, 1.0);
    const SampleGradFn fn = [&](std::size_t i, std::span<const double> out,
                                std::span<double> og) {
        const double e = out[0] - targets[i];
        og[0] = 2.0 * e;
        return e * e;
    };

    BatchGradWorkspace ws_s, ws_p;
    (void)batch_gradient_serial(net, inputs, n, fn, kGradChunk, ws_s);
    (void)batch_gradient_parallel(net, inputs, n, fn, kGradChunk, ws_p);

    const int reps = 20;
    auto t0 = clock_type::now();
    double stat_s = 0.0;
    for (int r = 0; r < reps; ++r)
        stat_s = batch_gradient_serial(net, inputs, n, fn, kGradChunk, ws_s);
    const double serial = seconds_since(t0) / reps;

    t0 = clock_type::now();
    double stat_p = 0.0;
    for (int r = 0; r < reps; ++r)
        stat_p = batch_gradient_parallel(net, inputs, n, fn, kGradChunk, ws_p);
    const double parallel = seconds_since(t0) / reps;

    const bool identical = ws_s.grads.weights == ws_p.grads.weights &&
                           ws_s.grads.biases == ws_p.grads.biases && stat_s == stat_p;
    std::printf("batch gradient  [3,256,256,256,1] x %zu samples\n", n);
    std::printf("  serial   %8.2f ms\n", 1e3 * serial);
    std::printf("  parallel %8.2f ms   speedup %.2fx   bit-identical: %s\n", 1e3 * parallel,
                serial / parallel, identical ? "yes" : "NO");
}

void bench_population_fitness() {
    const TuningScenario scenario = TuningScenario::standard(48.0, ConverterParams::desk());
    const Objective objective = make_pi_objective(scenario);
    Rng rng(2);
    const std::size_t n = 24;
    std::vector<Point2> candidates(n);
    for (auto& c : candidates) c = {rng.uniform(0.0, 0.05), rng.uniform(0.0, 2.0)};
    const auto eval = [&](std::size_t i) { return objective(candidates[i]); };

    const int reps = 5;
    auto t0 = clock_type::now();
    std::vector<double> fit_s;
    for (int r = 0; r < reps; ++r) fit_s = map_serial(n, eval);
    const double serial = seconds_since(t0) / reps;

    t0 = clock_type::now();
    std::vector<double> fit_p;
    for (int r = 0; r < reps; ++r) fit_p = map_parallel(n, eval);
    const double parallel = seconds_since(t0) / reps;

    std::printf("population fitness  %zu closed-loop candidates x 5000 steps\n", n);
    std::printf("  serial   %8.2f ms\n", 1e3 * serial);
    std::printf("  parallel %8.2f ms   speedup %.2fx   bit-identical: %s\n", 1e3 * parallel,
                serial / parallel, fit_s == fit_p ? "yes" : "NO");
}

}  // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());
    bench_batch_gradient();
    std::printf("\n");
    bench_population_fitness();
    return 0;
}
