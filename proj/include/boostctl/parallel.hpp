#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "boostctl/mlp.hpp"

namespace boostctl {

// Data-parallel kernels used by the trainers and tuners. Every kernel exists
// twice: a plain serial reference and an OpenMP version. Both use the same
// fixed chunked reduction order, so their results are bit-identical for any
// thread count; the tests assert exactly that and the bench target times them.

inline constexpr std::size_t kGradChunk = 16;

// Per-sample hook for batch gradient accumulation. Receives the sample index
// and the forward output, writes dL/d(output) into `output_grad`, and returns
// a per-sample statistic (typically the sample loss) that is summed in index
// order.
using SampleGradFn =
    std::function<double(std::size_t index, std::span<const double> output,
                         std::span<double> output_grad)>;

// Reusable buffers for batch_gradient; training loops issue tens of thousands
// of small batches, and recreating the gradient blocks each time costs more
// than the arithmetic.
struct BatchGradWorkspace {
    MlpGrads grads;  // kernel result: gradient summed over samples
    std::vector<MlpGrads> chunk_grads;
    std::vector<double> chunk_stat;
};

// inputs is a flat row-major (count x net.input_size()) matrix. Fills
// ws.grads with the sample-summed gradient and returns the summed statistic.
// Callers scale as needed.
double batch_gradient_serial(const Mlp& net, std::span<const double> inputs, std::size_t count,
                             const SampleGradFn& fn, std::size_t chunk, BatchGradWorkspace& ws);
double batch_gradient_parallel(const Mlp& net, std::span<const double> inputs, std::size_t count,
                               const SampleGradFn& fn, std::size_t chunk, BatchGradWorkspace& ws);

// Allocating convenience wrappers.
struct BatchGradResult {
    MlpGrads grads;
    double stat_sum = 0.0;
};
BatchGradResult batch_gradient_serial(const Mlp& net, std::span<const double> inputs,
                                      std::size_t count, const SampleGradFn& fn,
                                      std::size_t chunk = kGradChunk);
BatchGradResult batch_gradient_parallel(const Mlp& net, std::span<const double> inputs,
                                        std::size_t count, const SampleGradFn& fn,
                                        std::size_t chunk = kGradChunk);

// Independent evaluations into per-index slots (candidate fitness, grid cells).
std::vector<double> map_serial(std::size_t count, const std::function<double(std::size_t)>& fn);
std::vector<double> map_parallel(std::size_t count, const std::function<double(std::size_t)>& fn);

}  // namespace boostctl
