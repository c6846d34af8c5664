#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgedrop/detectors.hpp"
#include "edgedrop/filters.hpp"
#include "edgedrop/graph.hpp"

namespace edgedrop {

/// One Monte-Carlo experiment: graph source, signal model, trial counts,
/// methods under test, and sweep axes. Loaded from JSON and overridable
/// from the command line.
struct ExperimentConfig {
    // Graph source: generated unless a file is given.
    std::string graph_file;
    int n = 20;
    int k_per_side = 2;
    double p_rewire = 0.1;
    double weight_lo = 0.1;
    double weight_hi = 5.0;

    FilterKind filter = FilterKind::heat;
    double alpha = 0.5;
    double tau = 0.2;

    double sigma_x2 = 1.0;
    double sigma_w2 = 0.5;
    int samples = 100;  ///< M
    int r_true = 3;     ///< size of the drawn disconnection set
    int trials = 500;
    std::uint64_t seed = 1;

    std::vector<std::string> detectors{"lrt", "naive", "smsd", "bmsd"};
    std::vector<int> betas{0, 1};
    std::optional<int> r_max;
    std::vector<double> threshold_grid;  ///< empty: thresholds from scores

    // Sweeps (exactly one may be set for the F-score experiment).
    std::vector<int> samples_sweep;
    std::vector<double> sigma_w2_sweep;
    std::vector<int> n_sweep{20, 50, 100};  ///< runtime experiment

    int band_b = 0;  ///< 0: default band per graph size

    GraphFilter graph_filter() const;
};

ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_json(const ExperimentConfig& cfg);

/// Known detector names for the ROC experiment; "local-lrt" and
/// "greedy-local" expand over the configured beta list.
bool known_detector(const std::string& name);

struct RocRow {
    std::string detector;
    double threshold = 0.0;
    double pfa = 0.0;
    double pd = 0.0;
    int trials = 0;
};

struct RocResult {
    std::vector<RocRow> rows;
    /// Raw per-trial scores under each hypothesis, keyed by detector.
    std::map<std::string, std::vector<double>> h0_scores;
    std::map<std::string, std::vector<double>> h1_scores;
};

/// Per trial: draw a graph and a connectivity-preserving disconnection set,
/// score every detector on data from both hypotheses, then sweep thresholds
/// into empirical (false-alarm, detection) pairs.
RocResult run_roc(const ExperimentConfig& cfg);

/// Empirical detection probability at false-alarm level `alpha`, using the
/// null-score order statistic as the threshold.
double pd_at_pfa(std::vector<double> h0_scores,
                 const std::vector<double>& h1_scores, double alpha);

struct FscoreRow {
    std::string method;
    std::string sweep_param;
    double sweep_value = 0.0;
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    double fscore = 0.0;
    int trials = 0;
};

/// Micro-averaged F-score 2 TP / (2 TP + FN + FP) of the identification
/// methods along the configured sweep (sample count or noise variance).
std::vector<FscoreRow> run_fscore(const ExperimentConfig& cfg);

double micro_f_score(long long tp, long long fp, long long fn);

struct RuntimeRow {
    std::string method;
    int n = 0;
    double mean_seconds = 0.0;
    double std_seconds = 0.0;
    int trials = 0;
};

/// Mean wall-clock time of each identification method versus graph size.
/// Timing covers the identification call only (the eigendecompositions it
/// performs included), not graph or data generation.
std::vector<RuntimeRow> run_runtime(const ExperimentConfig& cfg);

std::string roc_csv(const std::vector<RocRow>& rows);
std::string fscore_csv(const std::vector<FscoreRow>& rows);
std::string runtime_csv(const std::vector<RuntimeRow>& rows);

/// Run manifest: command, full config echo, seed, and config hash. No
/// timestamps, so reruns are reproducible end to end.
std::string run_manifest_json(const std::string& command,
                              const ExperimentConfig& cfg);

}  // namespace edgedrop
