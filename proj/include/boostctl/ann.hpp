#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boostctl/mlp.hpp"

namespace boostctl {

// Sampling box for the supervised controller. Doubles as the [-1, 1] input
// normalization box, so it travels with the trained network.
struct AnnRanges {
    double v_in_lo = 20.0;
    double v_in_hi = 30.0;
    double v_target_lo = 40.0;
    double v_target_hi = 66.0;

    void validate() const;
};

// (v_in, v_target) -> duty samples. The first train_count rows are the
// training split (80% by count), the rest is held out.
struct AnnDataset {
    std::vector<double> v_in;
    std::vector<double> v_target;
    std::vector<double> duty;
    std::size_t train_count = 0;

    std::size_t size() const { return duty.size(); }
};

// The label is the ideal-converter law duty = 1 - v_in/v_target, the steady
// state relation the plant itself obeys.
double ideal_duty(double v_in, double v_target);

AnnDataset generate_dataset(const AnnRanges& ranges, std::size_t n, std::uint64_t seed);

void write_dataset_csv(const std::string& path, const AnnDataset& dataset);

struct AnnTrainConfig {
    std::vector<int> hidden{32, 32};
    int max_iterations = 80000;  // minibatch updates
    double target_mse = 3e-7;
    double learning_rate = 0.25;  // step-decayed to 1/2 and 1/4 late in the budget
    int batch_size = 128;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AnnTrainResult {
    Mlp net;
    double train_mse = 0.0;
    double test_mse = 0.0;
    int iterations = 0;
};

// Minibatch gradient descent on the duty MSE over the training split; inputs
// normalized to [-1, 1] over the ranges. Stops at target_mse (checked once
// per epoch on the training split) or at the iteration budget.
AnnTrainResult train_ann(const AnnDataset& dataset, const AnnTrainConfig& config,
                         const AnnRanges& ranges);

// Forward pass on normalized (v_in, v_ref); result clamped to the duty range.
// Inputs more than 10% of the span outside the box set *extrapolated.
double ann_duty(const Mlp& net, double v_in, double v_ref, const AnnRanges& ranges,
                double duty_min, double duty_max, bool* extrapolated = nullptr);

// Checkpoint bundling the network with its normalization box.
struct AnnArtifact {
    Mlp net;
    AnnRanges ranges;
};

void save_ann(const std::string& path, const AnnArtifact& artifact);
AnnArtifact load_ann(const std::string& path);

}  // namespace boostctl
