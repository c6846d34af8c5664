// Command-line frontend: graph generation, single-shot detection and
// identification, and the seeded Monte-Carlo experiments (ROC, F-score,
// runtime), all emitting machine-readable JSON/CSV.
//
// Exit codes: 0 success, 2 usage error, 3 unknown detector/filter name,
// 4 hypothesis cap exceeded, 5 unreadable/unwritable file, 6 invalid input.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "edgedrop/detectors.hpp"
#include "edgedrop/experiments.hpp"
#include "edgedrop/greedy.hpp"
#include "edgedrop/io.hpp"

namespace ed = edgedrop;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitUnknownName = 3;
constexpr int kExitCapExceeded = 4;
constexpr int kExitFileError = 5;
constexpr int kExitInvalid = 6;

struct CliError {
    int code;
    std::string message;
};

std::vector<ed::EdgeId> parse_edge_list(const std::string& text) {
    std::vector<ed::EdgeId> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma - pos);
        const auto dash = item.find('-');
        if (dash == std::string::npos)
            throw CliError{kExitUsage,
                           "edge list items must look like i-j: " + item};
        out.push_back(ed::make_edge_id(std::stoi(item.substr(0, dash)),
                                       std::stoi(item.substr(dash + 1))));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

json edge_array(const std::vector<ed::EdgeId>& edges) {
    json arr = json::array();
    for (const auto& [i, j] : edges) arr.push_back({i, j});
    return arr;
}

ed::GraphFilter make_filter(const std::string& name, double alpha,
                            double tau) {
    const auto kind = ed::parse_filter(name);
    if (!kind) throw CliError{kExitUnknownName, "unknown filter '" + name + "'"};
    switch (*kind) {
        case ed::FilterKind::gmrf: return ed::GraphFilter::gmrf();
        case ed::FilterKind::tikhonov: return ed::GraphFilter::tikhonov(alpha);
        case ed::FilterKind::heat: return ed::GraphFilter::heat(tau);
    }
    throw CliError{kExitUnknownName, "unknown filter '" + name + "'"};
}

ed::WeightedGraph load_graph_or_die(const std::string& path) {
    try {
        return ed::load_graph_json(path);
    } catch (const std::runtime_error& err) {
        throw CliError{kExitFileError, err.what()};
    }
}

// Shared model/data flags for detect, identify, and oracle-ml.
struct DataFlags {
    std::string graph_file;
    std::string signals_file;
    std::string filter = "heat";
    double alpha = 0.5;
    double tau = 0.2;
    double sigma_x2 = 1.0;
    double sigma_w2 = 0.5;
    int samples = 100;
    std::uint64_t data_seed = 1;
    std::string true_edges;  // generation topology when synthesizing data

    void attach(CLI::App* cmd) {
        cmd->add_option("--graph", graph_file, "graph JSON file")->required();
        cmd->add_option("--signals", signals_file,
                        "CSV of measurements (rows = vertices); generated "
                        "when omitted");
        cmd->add_option("--filter", filter, "gmrf|tikhonov|heat");
        cmd->add_option("--alpha", alpha, "tikhonov parameter");
        cmd->add_option("--tau", tau, "heat parameter");
        cmd->add_option("--sigma-x2", sigma_x2, "input variance");
        cmd->add_option("--sigma-w2", sigma_w2, "noise variance");
        cmd->add_option("--samples", samples, "sample count when generating");
        cmd->add_option("--seed", data_seed, "data generation seed");
        cmd->add_option("--true-edges", true_edges,
                        "i-j,... edges removed in the generating topology");
    }

    ed::SignalBatch batch(const ed::LaplacianView& base) const {
        if (!signals_file.empty()) {
            ed::SignalBatch b;
            try {
                b = ed::load_batch_csv(signals_file);
            } catch (const std::runtime_error& err) {
                throw CliError{kExitFileError, err.what()};
            }
            if (b.n() != base.size())
                throw CliError{kExitInvalid,
                               "signal rows do not match vertex count"};
            return b;
        }
        ed::LaplacianView topology = base;
        if (!true_edges.empty())
            topology =
                ed::apply_hypothesis(base, parse_edge_list(true_edges)).first;
        return ed::generate(
            {topology, make_filter(filter, alpha, tau), sigma_x2, sigma_w2},
            samples, data_seed);
    }
};

int cmd_generate(int n, int k_per_side, double p_rewire, double weight_lo,
                 double weight_hi, std::uint64_t seed,
                 const std::string& out) {
    const auto g =
        ed::watts_strogatz(n, k_per_side, p_rewire, weight_lo, weight_hi, seed);
    ed::save_graph_json(g, out);
    json summary;
    summary["n"] = g.n_vertices();
    summary["edges"] = g.edges().size();
    summary["file"] = out;
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_detect(const DataFlags& data, const std::string& detector,
               const std::string& edges_text, const ed::DetectorConfig& cfg) {
    const auto g = load_graph_or_die(data.graph_file);
    const auto base = ed::laplacian(g);
    const auto filter = make_filter(data.filter, data.alpha, data.tau);
    const auto batch = data.batch(base);
    const auto cov = ed::sample_covariance(batch);
    const int band_b =
        cfg.band_b > 0 ? cfg.band_b : ed::default_band(base.size());
    const int beta = cfg.beta.value_or(1);

    const auto need_edges = [&]() {
        if (edges_text.empty())
            throw CliError{kExitUsage,
                           "--edges is required for detector " + detector};
        return ed::apply_hypothesis(base, parse_edge_list(edges_text));
    };

    json out;
    out["detector"] = detector;
    double statistic = 0.0;
    if (detector == "lrt") {
        const auto [changed, hyp] = need_edges();
        const auto stat = ed::lrt_statistic(cov, base, changed, filter,
                                            data.sigma_x2, data.sigma_w2);
        statistic = stat.penalized;
        out["hypothesis"] = edge_array(parse_edge_list(edges_text));
        out["value"] = stat.value;
        out["penalty"] = stat.penalty;
        out["penalized"] = stat.penalized;
    } else if (detector == "local-lrt") {
        const auto [changed, hyp] = need_edges();
        const auto stat = ed::lrt_statistic(cov, base, changed, filter,
                                            data.sigma_x2, data.sigma_w2);
        const double value = ed::local_lrt(cov, base, hyp, beta, filter,
                                           data.sigma_x2, data.sigma_w2);
        statistic = value - stat.penalty;
        out["hypothesis"] = edge_array(parse_edge_list(edges_text));
        out["value"] = value;
        out["penalty"] = stat.penalty;
        out["penalized"] = statistic;
    } else if (detector == "gmrf") {
        if (filter.kind != ed::FilterKind::gmrf || data.sigma_w2 != 0.0)
            throw CliError{kExitInvalid,
                           "detector gmrf needs --filter gmrf --sigma-w2 0"};
        const auto [changed, hyp] = need_edges();
        statistic = ed::gmrf_lrt_noiseless(batch, base, hyp, data.sigma_x2);
        out["hypothesis"] = edge_array(parse_edge_list(edges_text));
    } else if (detector == "naive") {
        statistic = ed::naive_smoothness(batch, base);
    } else if (detector == "smsd") {
        const auto [changed, hyp] = need_edges();
        statistic = ed::smsd(batch, base, changed, band_b);
        out["hypothesis"] = edge_array(parse_edge_list(edges_text));
    } else if (detector == "bmsd") {
        statistic = ed::bmsd(batch, base, band_b);
    } else {
        throw CliError{kExitUnknownName, "unknown detector '" + detector + "'"};
    }

    out["statistic"] = statistic;
    out["threshold"] = cfg.threshold;
    out["decision"] = statistic > cfg.threshold ? "h1" : "h0";
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_identify(const DataFlags& data, const std::string& mode, int beta,
                 std::optional<int> r_max, const std::string& trace_out) {
    const auto g = load_graph_or_die(data.graph_file);
    const auto base = ed::laplacian(g);
    const auto filter = make_filter(data.filter, data.alpha, data.tau);
    const auto cov = ed::sample_covariance(data.batch(base));

    ed::GreedyConfig cfg;
    cfg.beta = beta;
    cfg.r_max = r_max;
    if (mode == "full")
        cfg.mode = ed::GreedyMode::full;
    else if (mode == "local")
        cfg.mode = ed::GreedyMode::local;
    else
        throw CliError{kExitUsage, "--mode must be full or local"};

    const auto result =
        cfg.mode == ed::GreedyMode::full
            ? ed::greedy_identify(cov, base, g.edges(), filter, data.sigma_x2,
                                  data.sigma_w2, cfg)
            : ed::greedy_identify_local(cov, base, g.edges(), filter,
                                        data.sigma_x2, data.sigma_w2, cfg);

    if (!trace_out.empty()) {
        std::string lines;
        for (const auto& it : result.trace) {
            json rec;
            rec["iteration"] = it.iteration;
            rec["search_set_size"] = it.search_set_size;
            rec["chosen"] = {it.chosen.first, it.chosen.second};
            rec["score"] = it.chosen_score;
            rec["accepted"] = it.accepted;
            json scores = json::array();
            for (const auto& [e, s] : it.scores)
                scores.push_back({e.first, e.second, s});
            rec["scores"] = std::move(scores);
            lines += rec.dump() + "\n";
        }
        ed::write_text_file(trace_out, lines);
    }

    json out;
    out["mode"] = mode;
    out["edges"] = edge_array(result.removed);
    out["iterations"] = result.trace.size();
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_oracle_ml(const DataFlags& data, int r_max, std::size_t cap) {
    const auto g = load_graph_or_die(data.graph_file);
    const auto base = ed::laplacian(g);
    const auto filter = make_filter(data.filter, data.alpha, data.tau);
    const auto cov = ed::sample_covariance(data.batch(base));

    std::vector<ed::DisconnectionHypothesis> hypotheses;
    try {
        hypotheses = ed::enumerate_hypotheses(base, r_max, cap);
    } catch (const std::runtime_error& err) {
        throw CliError{kExitCapExceeded, err.what()};
    }
    const auto decision = ed::ml_decision(cov, hypotheses, base, filter,
                                          data.sigma_x2, data.sigma_w2);

    std::vector<ed::EdgeId> edges;
    for (const auto& e : hypotheses[decision.index].removed_edges)
        edges.push_back(ed::edge_id(e));
    json out;
    out["index"] = decision.index;
    out["score"] = decision.score;
    out["edges"] = edge_array(edges);
    out["hypotheses"] = hypotheses.size();
    std::cout << out.dump() << "\n";
    return 0;
}

// Experiment flag set shared by roc / fscore / runtime.
struct ExperimentFlags {
    std::string config_file;
    std::string out_dir = ".";
    ed::ExperimentConfig cfg;
    std::string filter_name;
    std::string detectors_text;
    std::string betas_text;
    std::string threshold_text;
    std::string samples_sweep_text;
    std::string sigma_w2_sweep_text;
    std::string n_sweep_text;
    int r_max = 0;
    CLI::App* cmd = nullptr;

    void attach(CLI::App* app) {
        cmd = app;
        cmd->add_option("--config", config_file, "experiment config JSON");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--seed", cfg.seed, "experiment seed")->required();
        cmd->add_option("--n", cfg.n, "vertex count");
        cmd->add_option("--k-per-side", cfg.k_per_side);
        cmd->add_option("--p-rewire", cfg.p_rewire);
        cmd->add_option("--weight-lo", cfg.weight_lo);
        cmd->add_option("--weight-hi", cfg.weight_hi);
        cmd->add_option("--graph-file", cfg.graph_file);
        cmd->add_option("--filter", filter_name, "gmrf|tikhonov|heat");
        cmd->add_option("--alpha", cfg.alpha);
        cmd->add_option("--tau", cfg.tau);
        cmd->add_option("--sigma-x2", cfg.sigma_x2);
        cmd->add_option("--sigma-w2", cfg.sigma_w2);
        cmd->add_option("--samples", cfg.samples);
        cmd->add_option("--r-true", cfg.r_true);
        cmd->add_option("--trials", cfg.trials);
        cmd->add_option("--detectors", detectors_text, "comma-separated list");
        cmd->add_option("--beta,--betas", betas_text,
                        "comma-separated locality radii");
        cmd->add_option("--r-max", r_max);
        cmd->add_option("--threshold-grid", threshold_text,
                        "comma-separated thresholds");
        cmd->add_option("--samples-sweep", samples_sweep_text);
        cmd->add_option("--sigma-w2-sweep", sigma_w2_sweep_text);
        cmd->add_option("--n-sweep", n_sweep_text);
        cmd->add_option("--band", cfg.band_b);
    }

    template <typename T>
    static std::vector<T> parse_list(const std::string& text) {
        std::vector<T> out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto comma = text.find(',', pos);
            const auto item = text.substr(pos, comma - pos);
            if constexpr (std::is_same_v<T, int>)
                out.push_back(std::stoi(item));
            else if constexpr (std::is_same_v<T, double>)
                out.push_back(std::stod(item));
            else
                out.push_back(item);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    }

    ed::ExperimentConfig resolve() {
        ed::ExperimentConfig out;
        if (!config_file.empty()) {
            try {
                out = ed::load_experiment_config(config_file);
            } catch (const std::runtime_error& err) {
                throw CliError{kExitFileError, err.what()};
            }
        }
        const auto passed = [&](const std::string& flag) {
            return cmd->count(flag) > 0;
        };
        if (passed("--seed")) out.seed = cfg.seed;
        if (passed("--n")) out.n = cfg.n;
        if (passed("--k-per-side")) out.k_per_side = cfg.k_per_side;
        if (passed("--p-rewire")) out.p_rewire = cfg.p_rewire;
        if (passed("--weight-lo")) out.weight_lo = cfg.weight_lo;
        if (passed("--weight-hi")) out.weight_hi = cfg.weight_hi;
        if (passed("--graph-file")) out.graph_file = cfg.graph_file;
        if (passed("--filter")) {
            const auto kind = ed::parse_filter(filter_name);
            if (!kind)
                throw CliError{kExitUnknownName,
                               "unknown filter '" + filter_name + "'"};
            out.filter = *kind;
        }
        if (passed("--alpha")) out.alpha = cfg.alpha;
        if (passed("--tau")) out.tau = cfg.tau;
        if (passed("--sigma-x2")) out.sigma_x2 = cfg.sigma_x2;
        if (passed("--sigma-w2")) out.sigma_w2 = cfg.sigma_w2;
        if (passed("--samples")) out.samples = cfg.samples;
        if (passed("--r-true")) out.r_true = cfg.r_true;
        if (passed("--trials")) out.trials = cfg.trials;
        if (passed("--detectors"))
            out.detectors = parse_list<std::string>(detectors_text);
        if (passed("--beta")) out.betas = parse_list<int>(betas_text);
        if (passed("--r-max")) out.r_max = r_max;
        if (passed("--threshold-grid"))
            out.threshold_grid = parse_list<double>(threshold_text);
        if (passed("--samples-sweep"))
            out.samples_sweep = parse_list<int>(samples_sweep_text);
        if (passed("--sigma-w2-sweep"))
            out.sigma_w2_sweep = parse_list<double>(sigma_w2_sweep_text);
        if (passed("--n-sweep")) out.n_sweep = parse_list<int>(n_sweep_text);
        if (passed("--band")) out.band_b = cfg.band_b;

        for (const auto& d : out.detectors)
            if (!ed::known_detector(d))
                throw CliError{kExitUnknownName,
                               "unknown detector '" + d + "'"};
        return out;
    }
};

int run_experiment(const std::string& name, ExperimentFlags& flags) {
    const auto cfg = flags.resolve();
    std::filesystem::create_directories(flags.out_dir);
    const auto path = [&](const std::string& file) {
        return flags.out_dir + "/" + file;
    };

    std::string csv;
    if (name == "roc")
        csv = ed::roc_csv(ed::run_roc(cfg).rows);
    else if (name == "fscore")
        csv = ed::fscore_csv(ed::run_fscore(cfg));
    else
        csv = ed::runtime_csv(ed::run_runtime(cfg));

    ed::write_text_file(path(name + ".csv"), csv);
    ed::write_text_file(path(name + "_manifest.json"),
                        ed::run_manifest_json(name, cfg));
    json out;
    out["csv"] = path(name + ".csv");
    out["manifest"] = path(name + "_manifest.json");
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Detection and identification of disconnected edges in a known "
        "network topology from filtered graph signals"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write a random graph");
    int gen_n = 50, gen_k = 2;
    double gen_p = 0.1, gen_lo = 0.1, gen_hi = 5.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    generate->add_option("--n", gen_n, "vertex count");
    generate->add_option("--k-per-side", gen_k, "lattice neighbors per side");
    generate->add_option("--p-rewire", gen_p, "rewiring probability");
    generate->add_option("--weight-lo", gen_lo);
    generate->add_option("--weight-hi", gen_hi);
    generate->add_option("--seed", gen_seed)->required();
    generate->add_option("--out", gen_out)->required();

    // detect
    auto* detect = app.add_subcommand(
        "detect", "score one detector on a candidate edge set");
    DataFlags detect_data;
    detect_data.attach(detect);
    std::string det_name, det_edges;
    double det_threshold = 0.0;
    int det_beta = 1, det_band = 0;
    detect->add_option("--detector", det_name,
                       "lrt|local-lrt|gmrf|naive|smsd|bmsd")
        ->required();
    detect->add_option("--edges", det_edges, "candidate set i-j,...");
    detect->add_option("--threshold", det_threshold, "decision threshold");
    detect->add_option("--beta", det_beta, "locality radius for local-lrt");
    detect->add_option("--band", det_band, "band size for smsd/bmsd");

    // identify
    auto* identify =
        app.add_subcommand("identify", "greedy edge-disconnection search");
    DataFlags id_data;
    id_data.attach(identify);
    std::string id_mode = "local", id_trace;
    int id_beta = 1, id_rmax = 0;
    identify->add_option("--mode", id_mode, "full|local");
    identify->add_option("--beta", id_beta, "locality radius");
    identify->add_option("--r-max", id_rmax, "sparsity cap (0 = none)");
    identify->add_option("--trace-out", id_trace, "per-iteration JSONL file");

    // oracle-ml
    auto* oracle = app.add_subcommand(
        "oracle-ml", "exhaustive maximum-likelihood decision");
    DataFlags or_data;
    or_data.attach(oracle);
    int or_rmax = 1;
    std::size_t or_cap = 20000;
    oracle->add_option("--r-max", or_rmax, "largest removal-set size");
    oracle->add_option("--cap", or_cap, "hypothesis count cap");

    // experiments
    auto* roc = app.add_subcommand("roc", "Monte-Carlo ROC experiment");
    ExperimentFlags roc_flags;
    roc_flags.attach(roc);
    auto* fscore = app.add_subcommand("fscore", "identification F-score sweep");
    ExperimentFlags fscore_flags;
    fscore_flags.attach(fscore);
    auto* runtime = app.add_subcommand("runtime", "method runtime versus size");
    ExperimentFlags runtime_flags;
    runtime_flags.attach(runtime);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed())
            return cmd_generate(gen_n, gen_k, gen_p, gen_lo, gen_hi, gen_seed,
                                gen_out);
        if (detect->parsed()) {
            ed::DetectorConfig cfg;
            cfg.threshold = det_threshold;
            cfg.beta = det_beta;
            cfg.band_b = det_band;
            return cmd_detect(detect_data, det_name, det_edges, cfg);
        }
        if (identify->parsed())
            return cmd_identify(
                id_data, id_mode, id_beta,
                id_rmax > 0 ? std::optional<int>(id_rmax) : std::nullopt,
                id_trace);
        if (oracle->parsed()) return cmd_oracle_ml(or_data, or_rmax, or_cap);
        if (roc->parsed()) return run_experiment("roc", roc_flags);
        if (fscore->parsed()) return run_experiment("fscore", fscore_flags);
        if (runtime->parsed()) return run_experiment("runtime", runtime_flags);
    } catch (const CliError& err) {
        std::cerr << "error: " << err.message << "\n";
        return err.code;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFileError;
    }
    return kExitUsage;
}
