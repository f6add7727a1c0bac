#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace boostctl {

enum class Activation { Tanh, Relu, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Parameter-shaped gradient container. Layer l holds a row-major
// (layer_sizes[l+1] x layer_sizes[l]) weight block and a bias vector.
struct MlpGrads {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    void set_zero();
    void add(const MlpGrads& other);
    void scale(double factor);
    double squared_norm() const;
    bool is_finite() const;
};

// Dense feed-forward network with exact reverse-mode gradients. Shared by the
// policy/value networks and the supervised duty controller, so it stays
// deliberately small: fixed topology, double precision, plain loops.
class Mlp {
public:
    // Scratch space for one forward pass; required input to backward().
    struct Cache {
        std::vector<std::vector<double>> pre;   // pre-activation per layer
        std::vector<std::vector<double>> post;  // post[0] is the input
    };

    Mlp() = default;

    // Scaled-uniform init: every parameter drawn from
    // U(-b, b) with b = sqrt(6 / (fan_in + fan_out)) of its layer.
    static Mlp init(std::vector<int> layer_sizes, Activation hidden, Activation output,
                    std::uint64_t seed);

    std::vector<double> forward(std::span<const double> input, Cache* cache = nullptr) const;
    double forward_scalar(std::span<const double> input) const;

    // Gradients of the scalar whose d/d(output) is `output_grad`, evaluated at
    // the point recorded in `cache`.
    MlpGrads backward(const Cache& cache, std::span<const double> output_grad) const;

    // Same, but adds into an existing shape-congruent accumulator. The hot path
    // for batched training; avoids one gradient allocation per sample. With
    // accumulate=false the accumulator is overwritten, so it need not be
    // zeroed beforehand.
    void backward_accumulate(const Cache& cache, std::span<const double> output_grad,
                             MlpGrads& accum, bool accumulate = true) const;

    void apply_update(const MlpGrads& grads, double learning_rate);

    MlpGrads make_zero_grads() const;

    int input_size() const { return layer_sizes_.front(); }
    int output_size() const { return layer_sizes_.back(); }
    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    Activation hidden_activation() const { return hidden_; }
    Activation output_activation() const { return output_; }

    std::size_t parameter_count() const;
    // Flat parameter view in a fixed order (weights then bias, layer by layer);
    // used by the finite-difference oracle and tests.
    double get_parameter(std::size_t flat_index) const;
    void set_parameter(std::size_t flat_index, double value);

    std::vector<std::vector<double>>& weights() { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

    std::string to_json() const;
    static Mlp from_json(const std::string& text);
    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

private:
    std::vector<int> layer_sizes_;
    Activation hidden_ = Activation::Tanh;
    Activation output_ = Activation::Identity;
    std::vector<std::vector<double>> weights_;  // row-major (out x in) per layer
    std::vector<std::vector<double>> biases_;

    void check_shapes() const;
};

// Central-difference gradient estimate of loss(forward(input)) with respect to
// every parameter. Uses only the forward pass, so it is an independent check
// of backward().
MlpGrads finite_diff_grad(const Mlp& net, std::span<const double> input,
                          const std::function<double(std::span<const double>)>& loss,
                          double eps = 1e-5);

}  // namespace boostctl
