#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "boostctl/parallel.hpp"
#include "boostctl/rng.hpp"

using namespace boostctl;

namespace {

bool identical(const MlpGrads& a, const MlpGrads& b) {
    return a.weights == b.weights && a.biases == b.biases;
}

}  // namespace

TEST_CASE("serial and parallel batch gradients are bit-identical") {
    const Mlp net = Mlp::init({4, 24, 24, 2}, Activation::Tanh, Activation::Identity, 55);
    Rng rng(3);
    const std::size_t n = 100;
    std::vector<double> inputs(n * 4);
    std::vector<double> targets(n * 2);
    for (double& x : inputs) x = rng.uniform(-1.0, 1.0);
    for (double& t : targets) t = rng.uniform(-1.0, 1.0);

    const SampleGradFn fn = [&](std::size_t i, std::span<const double> out,
                                std::span<double> og) {
        double loss = 0.0;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double e = out[k] - targets[2 * i + k];
            og[k] = 2.0 * e;
            loss += e * e;
        }
        return loss;
    };

    for (std::size_t chunk : {1ul, 7ul, 16ul, 128ul}) {
        CAPTURE(chunk);
        const BatchGradResult s = batch_gradient_serial(net, inputs, n, fn, chunk);
        const BatchGradResult p = batch_gradient_parallel(net, inputs, n, fn, chunk);
        CHECK(identical(s.grads, p.grads));
        CHECK(s.stat_sum == p.stat_sum);
    }
}

TEST_CASE("workspace reuse matches the allocating call") {
    const Mlp net = Mlp::init({2, 8, 1}, Activation::Tanh, Activation::Identity, 9);
    Rng rng(5);
    std::vector<double> inputs(20 * 2);
    for (double& x : inputs) x = rng.uniform(-1.0, 1.0);
    const SampleGradFn fn = [](std::size_t, std::span<const double> out, std::span<double> og) {
        og[0] = out[0];
        return out[0];
    };

    BatchGradWorkspace ws;
    for (int rep = 0; rep < 3; ++rep) {
        const double stat = batch_gradient_parallel(net, inputs, 20, fn, 4, ws);
        const BatchGradResult fresh = batch_gradient_parallel(net, inputs, 20, fn, 4);
        CHECK(identical(ws.grads, fresh.grads));
        CHECK(stat == fresh.stat_sum);
    }
}

TEST_CASE("empty batch yields zero gradients") {
    const Mlp net = Mlp::init({2, 4, 1}, Activation::Tanh, Activation::Identity, 1);
    const SampleGradFn fn = [](std::size_t, std::span<const double>, std::span<double>) {
        return 1.0;
    };
    const BatchGradResult r = batch_gradient_serial(net, {}, 0, fn);
    CHECK(r.grads.squared_norm() == 0.0);
    CHECK(r.stat_sum == 0.0);
}

TEST_CASE("batch gradient validates arguments") {
    const Mlp net = Mlp::init({2, 4, 1}, Activation::Tanh, Activation::Identity, 1);
    const SampleGradFn fn = [](std::size_t, std::span<const double>, std::span<double>) {
        return 0.0;
    };
    std::vector<double> bad(3, 0.0);  // not a multiple of the input width
    CHECK_THROWS_AS((void)batch_gradient_serial(net, bad, 2, fn), std::invalid_argument);
    std::vector<double> ok(4, 0.0);
    CHECK_THROWS_AS((void)batch_gradient_serial(net, ok, 2, fn, 0), std::invalid_argument);
}

TEST_CASE("map kernels agree slot by slot") {
    const auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 3.7; };
    const std::vector<double> s = map_serial(257, fn);
    const std::vector<double> p = map_parallel(257, fn);
    CHECK(s == p);
}
