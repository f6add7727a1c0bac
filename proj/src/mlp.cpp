#include "boostctl/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "boostctl/rng.hpp"
#include "json.hpp"

namespace boostctl {

namespace {

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Tanh: return std::tanh(x);
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Identity: return x;
    }
    return x;
}

// Derivative in terms of pre-activation x and post-activation y = f(x).
double activate_deriv(Activation a, double x, double y) {
    switch (a) {
        case Activation::Tanh: return 1.0 - y * y;
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

}  // namespace

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation: " + name);
}

void MlpGrads::set_zero() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGrads::add(const MlpGrads& other) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const double* src = other.weights[l].data();
        double* dst = weights[l].data();
        const std::size_t n = weights[l].size();
        for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
        const double* bsrc = other.biases[l].data();
        double* bdst = biases[l].data();
        const std::size_t m = biases[l].size();
        for (std::size_t i = 0; i < m; ++i) bdst[i] += bsrc[i];
    }
}

void MlpGrads::scale(double factor) {
    for (auto& w : weights)
        for (double& x : w) x *= factor;
    for (auto& b : biases)
        for (double& x : b) x *= factor;
}

double MlpGrads::squared_norm() const {
    double s = 0.0;
    for (const auto& w : weights)
        for (double x : w) s += x * x;
    for (const auto& b : biases)
        for (double x : b) s += x * x;
    return s;
}

bool MlpGrads::is_finite() const {
    for (const auto& w : weights)
        for (double x : w)
            if (!std::isfinite(x)) return false;
    for (const auto& b : biases)
        for (double x : b)
            if (!std::isfinite(x)) return false;
    return true;
}

Mlp Mlp::init(std::vector<int> layer_sizes, Activation hidden, Activation output,
              std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("mlp: need at least an input and an output layer");
    for (int s : layer_sizes)
        if (s < 1) throw std::invalid_argument("mlp: layer sizes must be positive");

    Mlp net;
    net.layer_sizes_ = std::move(layer_sizes);
    net.hidden_ = hidden;
    net.output_ = output;

    Rng rng(seed);
    const std::size_t layers = net.layer_sizes_.size() - 1;
    net.weights_.resize(layers);
    net.biases_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        const int fan_in = net.layer_sizes_[l];
        const int fan_out = net.layer_sizes_[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        net.weights_[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
        net.biases_[l].resize(fan_out);
        for (double& w : net.weights_[l]) w = rng.uniform(-bound, bound);
        for (double& b : net.biases_[l]) b = rng.uniform(-bound, bound);
    }
    return net;
}

void Mlp::check_shapes() const {
    const std::size_t layers = layer_sizes_.size() - 1;
    if (weights_.size() != layers || biases_.size() != layers)
        throw std::invalid_argument("mlp: parameter arrays do not match layer_sizes");
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t rows = static_cast<std::size_t>(layer_sizes_[l + 1]);
        const std::size_t cols = static_cast<std::size_t>(layer_sizes_[l]);
        if (weights_[l].size() != rows * cols || biases_[l].size() != rows)
            throw std::invalid_argument("mlp: inconsistent parameter shapes");
        for (double w : weights_[l])
            if (!std::isfinite(w)) throw std::invalid_argument("mlp: non-finite weight");
        for (double b : biases_[l])
            if (!std::isfinite(b)) throw std::invalid_argument("mlp: non-finite bias");
    }
}

std::vector<double> Mlp::forward(std::span<const double> input, Cache* cache) const {
    if (static_cast<int>(input.size()) != layer_sizes_.front())
        throw std::invalid_argument("mlp forward: input size mismatch");
    for (double x : input)
        if (!std::isfinite(x)) throw std::invalid_argument("mlp forward: non-finite input");

    const std::size_t layers = weights_.size();
    if (cache) {
        cache->pre.resize(layers);
        cache->post.resize(layers + 1);
        cache->post[0].assign(input.begin(), input.end());
    }

    std::vector<double> cur(input.begin(), input.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < layers; ++l) {
        const int rows = layer_sizes_[l + 1];
        const int cols = layer_sizes_[l];
        const Activation act = (l + 1 == layers) ? output_ : hidden_;
        next.resize(rows);
        const double* w = weights_[l].data();
        const double* b = biases_[l].data();
        const double* x = cur.data();
        if (cache) cache->pre[l].resize(rows);
        for (int i = 0; i < rows; ++i) {
            const double* row = w + static_cast<std::size_t>(i) * cols;
            double sum = b[i];
#pragma omp simd reduction(+ : sum)
            for (int j = 0; j < cols; ++j) sum += row[j] * x[j];
            if (cache) cache->pre[l][i] = sum;
            next[i] = activate(act, sum);
        }
        cur.swap(next);
        if (cache) cache->post[l + 1] = cur;
    }
    return cur;
}

double Mlp::forward_scalar(std::span<const double> input) const {
    if (layer_sizes_.back() != 1)
        throw std::invalid_argument("mlp forward_scalar: output layer is not scalar");
    return forward(input)[0];
}

MlpGrads Mlp::backward(const Cache& cache, std::span<const double> output_grad) const {
    MlpGrads grads = make_zero_grads();
    backward_accumulate(cache, output_grad, grads);
    return grads;
}

void Mlp::backward_accumulate(const Cache& cache, std::span<const double> output_grad,
                              MlpGrads& grads, bool accumulate) const {
    const std::size_t layers = weights_.size();
    if (cache.pre.size() != layers || cache.post.size() != layers + 1)
        throw std::invalid_argument("mlp backward: cache does not match network");
    if (static_cast<int>(output_grad.size()) != layer_sizes_.back())
        throw std::invalid_argument("mlp backward: output gradient size mismatch");
    if (grads.weights.size() != layers)
        throw std::invalid_argument("mlp backward: accumulator shape mismatch");

    std::vector<double> delta(output_grad.begin(), output_grad.end());
    std::vector<double> prev;

    for (std::size_t l = layers; l-- > 0;) {
        const int rows = layer_sizes_[l + 1];
        const int cols = layer_sizes_[l];
        const Activation act = (l + 1 == layers) ? output_ : hidden_;
        const double* pre = cache.pre[l].data();
        const double* post = cache.post[l + 1].data();
        for (int i = 0; i < rows; ++i) delta[i] *= activate_deriv(act, pre[i], post[i]);

        const double* x = cache.post[l].data();
        double* gw = grads.weights[l].data();
        double* gb = grads.biases[l].data();
        for (int i = 0; i < rows; ++i) {
            const double d = delta[i];
            double* grow = gw + static_cast<std::size_t>(i) * cols;
            if (accumulate) {
#pragma omp simd
                for (int j = 0; j < cols; ++j) grow[j] += d * x[j];
                gb[i] += d;
            } else {
#pragma omp simd
                for (int j = 0; j < cols; ++j) grow[j] = d * x[j];
                gb[i] = d;
            }
        }

        if (l > 0) {
            prev.assign(cols, 0.0);
            const double* w = weights_[l].data();
            double* p = prev.data();
            for (int i = 0; i < rows; ++i) {
                const double d = delta[i];
                const double* row = w + static_cast<std::size_t>(i) * cols;
#pragma omp simd
                for (int j = 0; j < cols; ++j) p[j] += d * row[j];
            }
            delta.swap(prev);
        }
    }
}

void Mlp::apply_update(const MlpGrads& grads, double learning_rate) {
    if (learning_rate <= 0.0) throw std::invalid_argument("mlp update: learning rate must be > 0");
    if (grads.weights.size() != weights_.size())
        throw std::invalid_argument("mlp update: gradient shape mismatch");
    if (!grads.is_finite()) throw std::invalid_argument("mlp update: non-finite gradient");
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (grads.weights[l].size() != weights_[l].size() ||
            grads.biases[l].size() != biases_[l].size())
            throw std::invalid_argument("mlp update: gradient shape mismatch");
        const double* gw = grads.weights[l].data();
        double* w = weights_[l].data();
        const std::size_t n = weights_[l].size();
        for (std::size_t i = 0; i < n; ++i) w[i] -= learning_rate * gw[i];
        const double* gb = grads.biases[l].data();
        double* b = biases_[l].data();
        const std::size_t m = biases_[l].size();
        for (std::size_t i = 0; i < m; ++i) b[i] -= learning_rate * gb[i];
    }
}

MlpGrads Mlp::make_zero_grads() const {
    MlpGrads g;
    g.weights.resize(weights_.size());
    g.biases.resize(biases_.size());
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        g.weights[l].assign(weights_[l].size(), 0.0);
        g.biases[l].assign(biases_[l].size(), 0.0);
    }
    return g;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
    return n;
}

double Mlp::get_parameter(std::size_t flat_index) const {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (flat_index < weights_[l].size()) return weights_[l][flat_index];
        flat_index -= weights_[l].size();
        if (flat_index < biases_[l].size()) return biases_[l][flat_index];
        flat_index -= biases_[l].size();
    }
    throw std::out_of_range("mlp: parameter index out of range");
}

void Mlp::set_parameter(std::size_t flat_index, double value) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (flat_index < weights_[l].size()) {
            weights_[l][flat_index] = value;
            return;
        }
        flat_index -= weights_[l].size();
        if (flat_index < biases_[l].size()) {
            biases_[l][flat_index] = value;
            return;
        }
        flat_index -= biases_[l].size();
    }
    throw std::out_of_range("mlp: parameter index out of range");
}

std::string Mlp::to_json() const {
    nlohmann::json j;
    j["layer_sizes"] = layer_sizes_;
    j["hidden_activation"] = activation_name(hidden_);
    j["output_activation"] = activation_name(output_);
    j["weights"] = weights_;
    j["biases"] = biases_;
    return j.dump(2);
}

Mlp Mlp::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Mlp net;
    net.layer_sizes_ = j.at("layer_sizes").get<std::vector<int>>();
    net.hidden_ = activation_from_name(j.at("hidden_activation").get<std::string>());
    net.output_ = activation_from_name(j.at("output_activation").get<std::string>());
    net.weights_ = j.at("weights").get<std::vector<std::vector<double>>>();
    net.biases_ = j.at("biases").get<std::vector<std::vector<double>>>();
    net.check_shapes();
    return net;
}

void Mlp::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mlp save: cannot open " + path);
    out << to_json() << '\n';
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mlp load: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

MlpGrads finite_diff_grad(const Mlp& net, std::span<const double> input,
                          const std::function<double(std::span<const double>)>& loss,
                          double eps) {
    if (eps <= 0.0) throw std::invalid_argument("finite_diff_grad: eps must be > 0");
    Mlp probe = net;
    MlpGrads grads = net.make_zero_grads();
    std::size_t flat = 0;
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        for (std::size_t i = 0; i < grads.weights[l].size(); ++i, ++flat) {
            const double saved = probe.get_parameter(flat);
            probe.set_parameter(flat, saved + eps);
            const double up = loss(probe.forward(input));
            probe.set_parameter(flat, saved - eps);
            const double down = loss(probe.forward(input));
            probe.set_parameter(flat, saved);
            grads.weights[l][i] = (up - down) / (2.0 * eps);
        }
        for (std::size_t i = 0; i < grads.biases[l].size(); ++i, ++flat) {
            const double saved = probe.get_parameter(flat);
            probe.set_parameter(flat, saved + eps);
            const double up = loss(probe.forward(input));
            probe.set_parameter(flat, saved - eps);
            const double down = loss(probe.forward(input));
            probe.set_parameter(flat, saved);
            grads.biases[l][i] = (up - down) / (2.0 * eps);
        }
    }
    return grads;
}

}  // namespace boostctl
