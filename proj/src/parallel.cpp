#include "boostctl/parallel.hpp"

#include <stdexcept>

namespace boostctl {

namespace {

// One chunk processed start-to-end by a single thread. The first sample
// overwrites the chunk accumulator, later samples add; no zeroing needed.
double run_chunk(const Mlp& net, std::span<const double> inputs, std::size_t begin,
                 std::size_t end, const SampleGradFn& fn, Mlp::Cache& cache,
                 std::vector<double>& out_grad, MlpGrads& grads) {
    const std::size_t in_dim = static_cast<std::size_t>(net.input_size());
    double stat = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const std::span<const double> x = inputs.subspan(i * in_dim, in_dim);
        const std::vector<double> y = net.forward(x, &cache);
        std::fill(out_grad.begin(), out_grad.end(), 0.0);
        stat += fn(i, y, out_grad);
        net.backward_accumulate(cache, out_grad, grads, /*accumulate=*/i != begin);
    }
    return stat;
}

void prepare_workspace(const Mlp& net, std::size_t chunks, BatchGradWorkspace& ws) {
    if (ws.grads.weights.size() != net.weights().size()) ws.grads = net.make_zero_grads();
    while (ws.chunk_grads.size() < chunks) ws.chunk_grads.push_back(net.make_zero_grads());
    for (auto& g : ws.chunk_grads)
        if (g.weights.size() != net.weights().size()) g = net.make_zero_grads();
    ws.chunk_stat.assign(std::max<std::size_t>(chunks, 1), 0.0);
}

void check_args(const Mlp& net, std::span<const double> inputs, std::size_t count,
                std::size_t chunk) {
    if (chunk == 0) throw std::invalid_argument("batch_gradient: chunk must be > 0");
    if (inputs.size() != count * static_cast<std::size_t>(net.input_size()))
        throw std::invalid_argument("batch_gradient: input buffer size mismatch");
}

// Deterministic reduction: chunks combined in index order, identical for the
// serial and parallel kernels and for any thread count. The summed block is
// swapped into ws.grads rather than copied.
double reduce_chunks(std::size_t chunks, BatchGradWorkspace& ws) {
    if (chunks == 0) {
        ws.grads.set_zero();
        return 0.0;
    }
    double stat = ws.chunk_stat[0];
    for (std::size_t c = 1; c < chunks; ++c) {
        ws.chunk_grads[0].add(ws.chunk_grads[c]);
        stat += ws.chunk_stat[c];
    }
    std::swap(ws.grads, ws.chunk_grads[0]);
    return stat;
}

}  // namespace

double batch_gradient_serial(const Mlp& net, std::span<const double> inputs, std::size_t count,
                             const SampleGradFn& fn, std::size_t chunk, BatchGradWorkspace& ws) {
    check_args(net, inputs, count, chunk);
    const std::size_t chunks = (count + chunk - 1) / chunk;
    prepare_workspace(net, chunks, ws);

    Mlp::Cache cache;
    std::vector<double> out_grad(static_cast<std::size_t>(net.output_size()));
    for (std::size_t c = 0; c < chunks; ++c) {
        ws.chunk_stat[c] = run_chunk(net, inputs, c * chunk, std::min(count, (c + 1) * chunk), fn,
                                     cache, out_grad, ws.chunk_grads[c]);
    }
    return reduce_chunks(chunks, ws);
}

double batch_gradient_parallel(const Mlp& net, std::span<const double> inputs, std::size_t count,
                               const SampleGradFn& fn, std::size_t chunk,
                               BatchGradWorkspace& ws) {
    check_args(net, inputs, count, chunk);
    const std::size_t chunks = (count + chunk - 1) / chunk;
    prepare_workspace(net, chunks, ws);

#pragma omp parallel
    {
        Mlp::Cache cache;
        std::vector<double> out_grad(static_cast<std::size_t>(net.output_size()));
#pragma omp for schedule(dynamic, 1)
        for (long c = 0; c < static_cast<long>(chunks); ++c) {
            const std::size_t uc = static_cast<std::size_t>(c);
            ws.chunk_stat[uc] = run_chunk(net, inputs, uc * chunk,
                                          std::min(count, (uc + 1) * chunk), fn, cache, out_grad,
                                          ws.chunk_grads[uc]);
        }
    }
    return reduce_chunks(chunks, ws);
}

BatchGradResult batch_gradient_serial(const Mlp& net, std::span<const double> inputs,
                                      std::size_t count, const SampleGradFn& fn,
                                      std::size_t chunk) {
    BatchGradWorkspace ws;
    BatchGradResult result;
    result.stat_sum = batch_gradient_serial(net, inputs, count, fn, chunk, ws);
    result.grads = std::move(ws.grads);
    return result;
}

BatchGradResult batch_gradient_parallel(const Mlp& net, std::span<const double> inputs,
                                        std::size_t count, const SampleGradFn& fn,
                                        std::size_t chunk) {
    BatchGradWorkspace ws;
    BatchGradResult result;
    result.stat_sum = batch_gradient_parallel(net, inputs, count, fn, chunk, ws);
    result.grads = std::move(ws.grads);
    return result;
}

std::vector<double> map_serial(std::size_t count, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

std::vector<double> map_parallel(std::size_t count, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < static_cast<long>(count); ++i)
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
}

}  // namespace boostctl
