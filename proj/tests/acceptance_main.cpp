// Acceptance driver: runs the numbered acceptance checks and prints one
// machine-readable verdict per check. Slow artifacts (tuned gains, trained
// networks) are cached under an artifact directory so later checks and
// repeated runs reuse them.
//
//   acceptance <1..11|all|fast> [--artifacts DIR] [--seed N]
//
// "fast" runs the checks that need no training (1-6 and 8).

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "boostctl/acceptance.hpp"
#include "json.hpp"

using namespace boostctl;
namespace fs = std::filesystem;

namespace {

// Pinned seed for the training-dependent checks. With this seed the default
// Table learning rate fails the band check and the documented 3e-3 fallback
// trains a policy that holds it; the note printed by check 10 records which
// rate produced the shipped artifact.
constexpr std::uint64_t kDefaultSeed = 1;

struct Paths {
    fs::path dir;
    fs::path pso_json() const { return dir / "tune_pso.json"; }
    fs::path ga_json() const { return dir / "tune_ga.json"; }
    fs::path ann_json() const { return dir / "ann.json"; }
    std::string ppo_prefix() const { return (dir / "ppo_").string(); }
    fs::path ppo_header() const { return dir / "ppo_ppo.json"; }
    fs::path ppo_note() const { return dir / "ppo_note.txt"; }
    fs::path report_json() const { return dir / "report.json"; }
    fs::path metrics_csv() const { return dir / "metrics.csv"; }
    fs::path comparison_csv() const { return dir / "reference_comparison.csv"; }
};

std::optional<Point2> load_gains(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    in >> j;
    return Point2{j.at("k_p").get<double>(), j.at("k_i").get<double>()};
}

acceptance::CriterionResult run_tuners(const Paths& paths, std::uint64_t seed) {
    std::optional<Point2> pso = load_gains(paths.pso_json());
    std::optional<Point2> ga = load_gains(paths.ga_json());
    if (!pso) {
        const TuningScenario scenario = TuningScenario::standard(48.0, ConverterParams::desk());
        PsoConfig cfg;
        cfg.seed = seed + 3;
        const TuneResult r = pso_optimize(cfg, make_pi_objective(scenario));
        write_tuner_json(paths.pso_json().string(), "pso", r);
        pso = r.best.position;
    }
    if (!ga) {
        const TuningScenario scenario = TuningScenario::standard(48.0, ConverterParams::desk());
        GaConfig cfg;
        cfg.seed = seed + 4;
        const TuneResult r = ga_optimize(cfg, make_pi_objective(scenario));
        write_tuner_json(paths.ga_json().string(), "ga", r);
        ga = r.best.position;
    }
    return acceptance::tuner_soundness(pso, ga, /*run_if_missing=*/false, seed);
}

AnnArtifact ensure_ann(const Paths& paths, std::uint64_t seed) {
    if (fs::exists(paths.ann_json())) return load_ann(paths.ann_json().string());
    const AnnRanges ranges;
    const AnnDataset dataset = generate_dataset(ranges, 20000, seed);
    AnnTrainConfig cfg;
    cfg.seed = seed;
    const AnnTrainResult trained = train_ann(dataset, cfg, ranges);
    std::printf("# trained duty network: %d iterations, train mse %.2e, test mse %.2e\n",
                trained.iterations, trained.train_mse, trained.test_mse);
    const AnnArtifact artifact{trained.net, ranges};
    save_ann(paths.ann_json().string(), artifact);
    return artifact;
}

PpoCheckpoint ensure_ppo(const Paths& paths, std::uint64_t seed) {
    if (fs::exists(paths.ppo_header())) return load_ppo(paths.ppo_prefix());
    const acceptance::PpoTrainOutcome outcome =
        acceptance::train_ppo_with_fallback(48.0, ConverterParams::desk(), seed);
    std::printf("# ppo training: %s\n", outcome.note.c_str());
    save_ppo(paths.ppo_prefix(), outcome.result, outcome.config);
    std::ofstream note(paths.ppo_note());
    note << outcome.note << '\n';
    return PpoCheckpoint{outcome.result.policy, outcome.result.critic, outcome.config,
                         outcome.result.reward_curve};
}

Report ensure_report(const Paths& paths, std::uint64_t seed) {
    ExperimentArtifacts artifacts;
    artifacts.pi_pso = kReferencePsoGains;
    artifacts.pi_ga = kReferenceGaGains;
    artifacts.ann = ensure_ann(paths, seed);
    artifacts.rl = ensure_ppo(paths, seed).policy;

    ExperimentOptions options;
    options.seed = seed;
    const Report report = run_experiment(artifacts, options);
    write_report_json(paths.report_json().string(), report);
    write_metrics_csv(paths.metrics_csv().string(), report);
    write_reference_comparison_csv(paths.comparison_csv().string(), report);
    return report;
}

acceptance::CriterionResult run_one(int id, const Paths& paths, std::uint64_t seed) {
    switch (id) {
        case 1: return acceptance::gradient_oracle();
        case 2: return acceptance::plant_equilibrium();
        case 3: return acceptance::integrator_order();
        case 4: return acceptance::metrics_oracle();
        case 5: return acceptance::gae_oracle();
        case 6: return acceptance::ppo_algebra();
        case 7: return run_tuners(paths, seed);
        case 8: return acceptance::pi_regulation();
        case 9: return acceptance::ann_accuracy(ensure_ann(paths, seed));
        case 10: return acceptance::ppo_outcome(ensure_ppo(paths, seed));
        case 11: return acceptance::comparison_orderings(ensure_report(paths, seed));
    }
    return acceptance::CriterionResult{id, "unknown",
                                       acceptance::CriterionResult::Status::Skip,
                                       "no such check"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <1..11|all|fast> [--artifacts DIR] [--seed N]\n");
        return 2;
    }
    Paths paths{fs::path("acceptance_artifacts")};
    std::uint64_t seed = kDefaultSeed;
    const std::string what = argv[1];
    for (int i = 2; i + 1 < argc; i += 2) {
        if (std::strcmp(argv[i], "--artifacts") == 0) paths.dir = argv[i + 1];
        else if (std::strcmp(argv[i], "--seed") == 0) seed = std::strtoull(argv[i + 1], nullptr, 10);
    }
    fs::create_directories(paths.dir);

    std::vector<int> ids;
    if (what == "all") ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    else if (what == "fast") ids = {1, 2, 3, 4, 5, 6, 8};
    else ids = {std::atoi(what.c_str())};

    bool all_pass = true;
    for (int id : ids) {
        const acceptance::CriterionResult r = run_one(id, paths, seed);
        std::printf("%s\n", acceptance::format_criterion(r).c_str());
        std::fflush(stdout);
        if (!r.passed()) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
