#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "boostctl/ann.hpp"

using namespace boostctl;

TEST_CASE("the ideal duty law inverts the voltage gain") {
    CHECK(ideal_duty(24.0, 48.0) == 0.5);
    CHECK(ideal_duty(24.0, 60.0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(ideal_duty(26.0, 48.0) == doctest::Approx(1.0 - 26.0 / 48.0).epsilon(1e-15));
    CHECK(ideal_duty(24.0, 24.0) == 0.0);  // boundary, excluded by generation ranges
}

TEST_CASE("dataset generation") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 1000, 7);
    CHECK(ds.size() == 1000);
    CHECK(ds.train_count == 800);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.v_in[i] >= ranges.v_in_lo);
        CHECK(ds.v_in[i] <= ranges.v_in_hi);
        CHECK(ds.v_target[i] >= ranges.v_target_lo);
        CHECK(ds.v_target[i] <= ranges.v_target_hi);
        CHECK(ds.duty[i] == ideal_duty(ds.v_in[i], ds.v_target[i]));
        CHECK(ds.duty[i] > 0.0);
        CHECK(ds.duty[i] < 1.0);
    }

    const AnnDataset again = generate_dataset(ranges, 1000, 7);
    CHECK(again.v_in == ds.v_in);

    CHECK_THROWS_AS(generate_dataset(ranges, 5, 1), std::invalid_argument);
    AnnRanges overlapping;
    overlapping.v_target_lo = 25.0;  // overlaps the v_in range
    CHECK_THROWS_AS(generate_dataset(overlapping, 100, 1), std::invalid_argument);
}

TEST_CASE("training fits the duty map on a modest sample budget") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 4000, 11);
    AnnTrainConfig cfg;
    cfg.hidden = {16, 16};
    cfg.max_iterations = 6000;
    cfg.target_mse = 2e-6;
    cfg.seed = 11;
    const AnnTrainResult r = train_ann(ds, cfg, ranges);
    CHECK(r.train_mse < 1e-4);
    CHECK(r.test_mse < 2e-4);
    // Spot-check the two scenario corners used by the experiments.
    const double d48 = ann_duty(r.net, 24.0, 48.0, ranges, 0.05, 0.95);
    CHECK(d48 == doctest::Approx(0.5).epsilon(0.03));
    const double d26 = ann_duty(r.net, 26.0, 48.0, ranges, 0.05, 0.95);
    CHECK(d26 == doctest::Approx(1.0 - 26.0 / 48.0).epsilon(0.03));
}

TEST_CASE("constant labels collapse to a constant network") {
    const AnnRanges ranges;
    AnnDataset ds = generate_dataset(ranges, 500, 3);
    std::fill(ds.duty.begin(), ds.duty.end(), 0.5);
    AnnTrainConfig cfg;
    cfg.hidden = {8};
    cfg.max_iterations = 8000;
    cfg.learning_rate = 0.05;
    cfg.target_mse = 1e-8;
    cfg.seed = 3;
    const AnnTrainResult r = train_ann(ds, cfg, ranges);
    CHECK(r.train_mse < 1e-5);
    CHECK(ann_duty(r.net, 25.0, 50.0, ranges, 0.0, 1.0) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("training is reproducible by seed") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 400, 5);
    AnnTrainConfig cfg;
    cfg.hidden = {8};
    cfg.max_iterations = 300;
    cfg.seed = 9;
    const AnnTrainResult a = train_ann(ds, cfg, ranges);
    const AnnTrainResult b = train_ann(ds, cfg, ranges);
    CHECK(a.train_mse == b.train_mse);
    CHECK(a.net.weights() == b.net.weights());
}

TEST_CASE("duty output clamps and flags extrapolation") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 200, 2);
    AnnTrainConfig cfg;
    cfg.hidden = {4};
    cfg.max_iterations = 50;
    cfg.seed = 2;
    const AnnTrainResult r = train_ann(ds, cfg, ranges);

    bool extrapolated = false;
    const double d = ann_duty(r.net, 24.0, 500.0, ranges, 0.05, 0.95, &extrapolated);
    CHECK(extrapolated);
    CHECK(d >= 0.05);
    CHECK(d <= 0.95);

    extrapolated = true;
    (void)ann_duty(r.net, 24.0, 48.0, ranges, 0.05, 0.95, &extrapolated);
    CHECK_FALSE(extrapolated);
}

TEST_CASE("artifact round trip") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 200, 8);
    AnnTrainConfig cfg;
    cfg.hidden = {6};
    cfg.max_iterations = 100;
    cfg.seed = 8;
    const AnnTrainResult r = train_ann(ds, cfg, ranges);

    const auto path = std::filesystem::temp_directory_path() / "boostctl_ann.json";
    save_ann(path.string(), AnnArtifact{r.net, ranges});
    const AnnArtifact back = load_ann(path.string());
    std::filesystem::remove(path);

    CHECK(back.ranges.v_in_lo == ranges.v_in_lo);
    CHECK(back.ranges.v_target_hi == ranges.v_target_hi);
    CHECK(ann_duty(back.net, 24.0, 48.0, back.ranges, 0.05, 0.95) ==
          ann_duty(r.net, 24.0, 48.0, ranges, 0.05, 0.95));
}

TEST_CASE("dataset csv export") {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 20, 4);
    const auto path = std::filesystem::temp_directory_path() / "boostctl_ds.csv";
    write_dataset_csv(path.string(), ds);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "v_in,v_target,duty");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    in.close();
    std::filesystem::remove(path);
    CHECK(lines == 20);
}
