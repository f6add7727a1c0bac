#include "boostctl/ann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "boostctl/parallel.hpp"
#include "boostctl/rng.hpp"
#include "json.hpp"

namespace boostctl {

void AnnRanges::validate() const {
    if (!(0.0 < v_in_lo && v_in_lo < v_in_hi))
        throw std::invalid_argument("ann ranges: bad v_in range");
    if (!(0.0 < v_target_lo && v_target_lo < v_target_hi))
        throw std::invalid_argument("ann ranges: bad v_target range");
    if (!(v_target_lo > v_in_hi))
        throw std::invalid_argument("ann ranges: v_target range must sit above v_in range");
}

double ideal_duty(double v_in, double v_target) {
    if (v_target <= 0.0) throw std::invalid_argument("ideal_duty: v_target must be > 0");
    return 1.0 - v_in / v_target;
}

AnnDataset generate_dataset(const AnnRanges& ranges, std::size_t n, std::uint64_t seed) {
    ranges.validate();
    if (n < 10) throw std::invalid_argument("generate_dataset: need n >= 10");

    Rng rng(seed);
    AnnDataset ds;
    ds.v_in.resize(n);
    ds.v_target.resize(n);
    ds.duty.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ds.v_in[i] = rng.uniform(ranges.v_in_lo, ranges.v_in_hi);
        ds.v_target[i] = rng.uniform(ranges.v_target_lo, ranges.v_target_hi);
        ds.duty[i] = ideal_duty(ds.v_in[i], ds.v_target[i]);
    }
    ds.train_count = n * 4 / 5;
    return ds;
}

void write_dataset_csv(const std::string& path, const AnnDataset& dataset) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "v_in,v_target,duty\n";
    char line[128];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g\n", dataset.v_in[i],
                      dataset.v_target[i], dataset.duty[i]);
        out << line;
    }
}

void AnnTrainConfig::validate() const {
    if (hidden.empty()) throw std::invalid_argument("ann config: need at least one hidden layer");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("ann config: hidden sizes must be positive");
    if (max_iterations < 1) throw std::invalid_argument("ann config: max_iterations must be >= 1");
    if (target_mse <= 0.0) throw std::invalid_argument("ann config: target_mse must be > 0");
    if (learning_rate <= 0.0) throw std::invalid_argument("ann config: learning rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("ann config: batch_size must be >= 1");
}

namespace {

inline double norm_unit(double x, double lo, double hi) {
    return 2.0 * (x - lo) / (hi - lo) - 1.0;
}

std::vector<double> normalized_inputs(const AnnDataset& ds, const AnnRanges& r) {
    std::vector<double> x(ds.size() * 2);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        x[2 * i] = norm_unit(ds.v_in[i], r.v_in_lo, r.v_in_hi);
        x[2 * i + 1] = norm_unit(ds.v_target[i], r.v_target_lo, r.v_target_hi);
    }
    return x;
}

double split_mse(const Mlp& net, const std::vector<double>& inputs, const AnnDataset& ds,
                 std::size_t begin, std::size_t end) {
    if (begin >= end) return 0.0;
    const auto errs = map_parallel(end - begin, [&](std::size_t k) {
        const std::size_t i = begin + k;
        const double pred = net.forward(std::span(inputs).subspan(2 * i, 2))[0];
        const double e = pred - ds.duty[i];
        return e * e;
    });
    double sum = 0.0;
    for (double e : errs) sum += e;
    return sum / static_cast<double>(end - begin);
}

}  // namespace

AnnTrainResult train_ann(const AnnDataset& dataset, const AnnTrainConfig& config,
                         const AnnRanges& ranges) {
    config.validate();
    ranges.validate();
    if (dataset.size() == 0 || dataset.train_count == 0 || dataset.train_count > dataset.size())
        throw std::invalid_argument("train_ann: bad dataset split");

    std::vector<int> sizes;
    sizes.push_back(2);
    for (int h : config.hidden) sizes.push_back(h);
    sizes.push_back(1);

    AnnTrainResult result;
    result.net = Mlp::init(sizes, Activation::Tanh, Activation::Identity, config.seed);

    const std::vector<double> inputs = normalized_inputs(dataset, ranges);
    const std::size_t n_train = dataset.train_count;

    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> perm(n_train);
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<double> batch_inputs;
    std::vector<std::size_t> batch_idx;
    BatchGradWorkspace ws;
    int iterations = 0;
    std::size_t cursor = n_train;  // forces an initial shuffle

    while (iterations < config.max_iterations) {
        if (cursor >= n_train) {
            for (std::size_t i = n_train; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
            cursor = 0;
            // Epoch boundary: cheap convergence check on the training split.
            if (iterations > 0 &&
                split_mse(result.net, inputs, dataset, 0, n_train) <= config.target_mse)
                break;
        }
        const std::size_t m =
            std::min<std::size_t>(config.batch_size, n_train - cursor);
        batch_idx.assign(perm.begin() + cursor, perm.begin() + cursor + m);
        cursor += m;

        batch_inputs.resize(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            batch_inputs[2 * i] = inputs[2 * batch_idx[i]];
            batch_inputs[2 * i + 1] = inputs[2 * batch_idx[i] + 1];
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        const auto grad_fn = [&](std::size_t i, std::span<const double> out,
                                 std::span<double> out_grad) {
            const double err = out[0] - dataset.duty[batch_idx[i]];
            out_grad[0] = 2.0 * inv_m * err;
            return err * err;
        };
        const double loss_sum =
            batch_gradient_parallel(result.net, batch_inputs, m, grad_fn, kGradChunk, ws);
        if (!std::isfinite(loss_sum))
            throw std::runtime_error("train_ann: non-finite training loss");
        // Step decay tightens the SGD noise ball near the end of the budget.
        double lr = config.learning_rate;
        if (iterations >= (config.max_iterations * 17) / 20) lr *= 0.25;
        else if (iterations >= (config.max_iterations * 3) / 5) lr *= 0.5;
        result.net.apply_update(ws.grads, lr);
        ++iterations;
    }

    result.iterations = iterations;
    result.train_mse = split_mse(result.net, inputs, dataset, 0, n_train);
    result.test_mse = split_mse(result.net, inputs, dataset, n_train, dataset.size());
    return result;
}

double ann_duty(const Mlp& net, double v_in, double v_ref, const AnnRanges& ranges,
                double duty_min, double duty_max, bool* extrapolated) {
    const double in_margin = 0.1 * (ranges.v_in_hi - ranges.v_in_lo);
    const double tg_margin = 0.1 * (ranges.v_target_hi - ranges.v_target_lo);
    if (extrapolated) {
        *extrapolated = v_in < ranges.v_in_lo - in_margin || v_in > ranges.v_in_hi + in_margin ||
                        v_ref < ranges.v_target_lo - tg_margin ||
                        v_ref > ranges.v_target_hi + tg_margin;
    }
    const double x[2] = {norm_unit(v_in, ranges.v_in_lo, ranges.v_in_hi),
                         norm_unit(v_ref, ranges.v_target_lo, ranges.v_target_hi)};
    const double raw = net.forward(std::span(x, 2))[0];
    return std::clamp(raw, duty_min, duty_max);
}

void save_ann(const std::string& path, const AnnArtifact& artifact) {
    nlohmann::json j;
    j["v_in_range"] = {artifact.ranges.v_in_lo, artifact.ranges.v_in_hi};
    j["v_target_range"] = {artifact.ranges.v_target_lo, artifact.ranges.v_target_hi};
    j["net"] = nlohmann::json::parse(artifact.net.to_json());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

AnnArtifact load_ann(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    AnnArtifact a;
    a.ranges.v_in_lo = j.at("v_in_range")[0].get<double>();
    a.ranges.v_in_hi = j.at("v_in_range")[1].get<double>();
    a.ranges.v_target_lo = j.at("v_target_range")[0].get<double>();
    a.ranges.v_target_hi = j.at("v_target_range")[1].get<double>();
    a.ranges.validate();
    a.net = Mlp::from_json(j.at("net").dump());
    return a;
}

}  // namespace boostctl
