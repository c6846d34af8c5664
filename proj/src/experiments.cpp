#include "edgedrop/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "edgedrop/greedy.hpp"
#include "edgedrop/io.hpp"
#include "edgedrop/rng.hpp"

namespace edgedrop {

using nlohmann::json;

GraphFilter ExperimentConfig::graph_filter() const {
    switch (filter) {
        case FilterKind::gmrf: return GraphFilter::gmrf();
        case FilterKind::tikhonov: return GraphFilter::tikhonov(alpha);
        case FilterKind::heat: return GraphFilter::heat(tau);
    }
    throw std::logic_error("unreachable");
}

namespace {

const std::set<std::string> kDetectorNames{
    "lrt", "local-lrt", "naive", "smsd", "bmsd",
    "greedy", "greedy-local", "chance"};

// Substream slots within a trial.
enum TrialSlot : std::uint64_t {
    kSlotGraph = 0,
    kSlotTrueSet = 1,
    kSlotDataH1 = 2,
    kSlotDataH0 = 3,
    kSlotChance = 4,
    kSlotsPerTrial = 16
};

std::uint64_t trial_seed(std::uint64_t seed, int trial, TrialSlot slot) {
    return Rng::derive(seed, static_cast<std::uint64_t>(trial) *
                                     kSlotsPerTrial +
                                 slot);
}

WeightedGraph trial_graph(const ExperimentConfig& cfg, int n,
                          std::uint64_t seed) {
    if (!cfg.graph_file.empty()) return load_graph_json(cfg.graph_file);
    return watts_strogatz(n, cfg.k_per_side, cfg.p_rewire, cfg.weight_lo,
                          cfg.weight_hi, seed);
}

/// Uniform size-r edge subset whose removal keeps the graph connected.
std::vector<EdgeId> draw_true_set(const WeightedGraph& g, int r,
                                  std::uint64_t seed) {
    const auto ids = g.edge_ids();
    if (r < 1 || r > static_cast<int>(ids.size()))
        throw std::invalid_argument("true disconnection count out of range");
    Rng rng(seed);
    for (int attempt = 0; attempt < 500; ++attempt) {
        std::vector<int> idx(ids.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (int t = 0; t < r; ++t)
            std::swap(idx[t], idx[t + rng.below(idx.size() - t)]);
        std::vector<EdgeId> removed;
        for (int t = 0; t < r; ++t) removed.push_back(ids[idx[t]]);
        std::sort(removed.begin(), removed.end());
        if (connected_after_removal(g.n_vertices(), ids, removed))
            return removed;
    }
    throw std::runtime_error(
        "no connectivity-preserving disconnection set found");
}

struct Trial {
    WeightedGraph g;
    LaplacianView base;
    LaplacianView changed;
    DisconnectionHypothesis hyp;
    SignalBatch batch_h0, batch_h1;
    SampleCovariance cov_h0, cov_h1;
    double true_penalty = 0.0;  ///< data-independent term of the true set
    std::uint64_t chance_seed = 0;
};

Trial make_trial(const ExperimentConfig& cfg, int n, int samples,
                 double sigma_w2, int trial_index, bool with_h0_data) {
    Trial t;
    t.g = trial_graph(cfg, n, trial_seed(cfg.seed, trial_index, kSlotGraph));
    t.chance_seed = trial_seed(cfg.seed, trial_index, kSlotChance);
    t.base = laplacian(t.g);
    const auto removed = draw_true_set(
        t.g, cfg.r_true, trial_seed(cfg.seed, trial_index, kSlotTrueSet));
    auto [changed, hyp] = apply_hypothesis(t.base, removed);
    t.changed = std::move(changed);
    t.hyp = std::move(hyp);

    const GraphFilter f = cfg.graph_filter();
    t.batch_h1 = generate({t.changed, f, cfg.sigma_x2, sigma_w2}, samples,
                          trial_seed(cfg.seed, trial_index, kSlotDataH1));
    t.cov_h1 = sample_covariance(t.batch_h1);
    if (with_h0_data) {
        t.batch_h0 = generate({t.base, f, cfg.sigma_x2, sigma_w2}, samples,
                              trial_seed(cfg.seed, trial_index, kSlotDataH0));
        t.cov_h0 = sample_covariance(t.batch_h0);
        t.true_penalty = lrt_statistic(t.cov_h0, t.base, t.changed, f,
                                       cfg.sigma_x2, sigma_w2)
                             .penalty;
    }
    return t;
}

std::vector<std::string> expand_detectors(const ExperimentConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& name : cfg.detectors) {
        if (!known_detector(name))
            throw std::invalid_argument("unknown detector '" + name + "'");
        if (name == "local-lrt") {
            for (int b : cfg.betas)
                out.push_back("local-lrt-b" + std::to_string(b));
        } else if (name == "greedy-local") {
            for (int b : cfg.betas)
                out.push_back("greedy-b" + std::to_string(b));
        } else {
            out.push_back(name);
        }
    }
    return out;
}

GreedyConfig greedy_cfg_for(const ExperimentConfig& cfg, GreedyMode mode,
                            int beta) {
    GreedyConfig gc;
    gc.mode = mode;
    gc.beta = beta;
    gc.r_max = cfg.r_max;
    return gc;
}

double greedy_detector_score(const ExperimentConfig& cfg, const Trial& t,
                             const SampleCovariance& cov, GreedyMode mode,
                             int beta, double sigma_w2) {
    const GraphFilter f = cfg.graph_filter();
    const auto est =
        (mode == GreedyMode::full
             ? greedy_identify(cov, t.base, t.g.edges(), f, cfg.sigma_x2,
                               sigma_w2, greedy_cfg_for(cfg, mode, beta))
             : greedy_identify_local(cov, t.base, t.g.edges(), f, cfg.sigma_x2,
                                     sigma_w2, greedy_cfg_for(cfg, mode, beta)))
            .removed;
    if (est.empty()) return 0.0;
    const auto changed = apply_hypothesis(t.base, est).first;
    return lrt_statistic(cov, t.base, changed, f, cfg.sigma_x2, sigma_w2)
        .penalized;
}

double detector_score(const std::string& name, const ExperimentConfig& cfg,
                      const Trial& t, bool under_h1, double sigma_w2,
                      int band) {
    const auto& batch = under_h1 ? t.batch_h1 : t.batch_h0;
    const auto& cov = under_h1 ? t.cov_h1 : t.cov_h0;
    const GraphFilter f = cfg.graph_filter();

    if (name == "lrt")
        return lrt_statistic(cov, t.base, t.changed, f, cfg.sigma_x2, sigma_w2)
            .penalized;
    if (name.rfind("local-lrt-b", 0) == 0) {
        const int beta = std::stoi(name.substr(11));
        return local_lrt(cov, t.base, t.hyp, beta, f, cfg.sigma_x2, sigma_w2) -
               t.true_penalty;
    }
    if (name == "naive") return naive_smoothness(batch, t.base);
    if (name == "smsd") return smsd(batch, t.base, t.changed, band);
    if (name == "bmsd") return bmsd(batch, t.base, band);
    if (name == "greedy")
        return greedy_detector_score(cfg, t, cov, GreedyMode::full, 0,
                                     sigma_w2);
    if (name.rfind("greedy-b", 0) == 0) {
        const int beta = std::stoi(name.substr(8));
        return greedy_detector_score(cfg, t, cov, GreedyMode::local, beta,
                                     sigma_w2);
    }
    if (name == "chance")
        return Rng::stream(t.chance_seed, under_h1 ? 1 : 0).uniform();
    throw std::invalid_argument("unknown detector '" + name + "'");
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double std_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (xs.size() - 1));
}

}  // namespace

bool known_detector(const std::string& name) {
    return kDetectorNames.count(name) > 0;
}

RocResult run_roc(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("need trials >= 1");
    const auto detectors = expand_detectors(cfg);
    const int band = cfg.band_b > 0 ? cfg.band_b : default_band(cfg.n);

    RocResult result;
    for (const auto& d : detectors) {
        result.h0_scores[d].reserve(cfg.trials);
        result.h1_scores[d].reserve(cfg.trials);
    }
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const Trial t =
            make_trial(cfg, cfg.n, cfg.samples, cfg.sigma_w2, trial, true);
        for (const auto& d : detectors) {
            result.h0_scores[d].push_back(
                detector_score(d, cfg, t, false, cfg.sigma_w2, band));
            result.h1_scores[d].push_back(
                detector_score(d, cfg, t, true, cfg.sigma_w2, band));
        }
    }

    for (const auto& d : detectors) {
        const auto& h0 = result.h0_scores[d];
        const auto& h1 = result.h1_scores[d];
        std::vector<double> thresholds = cfg.threshold_grid;
        if (thresholds.empty()) {
            thresholds.insert(thresholds.end(), h0.begin(), h0.end());
            thresholds.insert(thresholds.end(), h1.begin(), h1.end());
        }
        std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                         thresholds.end());
        const auto frac_above = [&](const std::vector<double>& xs, double thr) {
            const auto count = std::count_if(
                xs.begin(), xs.end(), [&](double x) { return x > thr; });
            return static_cast<double>(count) / xs.size();
        };
        // Descending thresholds give rows with nondecreasing false-alarm rate.
        for (double thr : thresholds)
            result.rows.push_back(
                {d, thr, frac_above(h0, thr), frac_above(h1, thr), cfg.trials});
    }
    return result;
}

double pd_at_pfa(std::vector<double> h0_scores,
                 const std::vector<double>& h1_scores, double alpha) {
    if (h0_scores.empty() || h1_scores.empty())
        throw std::invalid_argument("need scores under both hypotheses");
    std::sort(h0_scores.begin(), h0_scores.end(), std::greater<>());
    auto k = static_cast<std::size_t>(alpha * h0_scores.size());
    if (k >= h0_scores.size()) k = h0_scores.size() - 1;
    const double thr = h0_scores[k];
    const auto count =
        std::count_if(h1_scores.begin(), h1_scores.end(),
                      [&](double x) { return x > thr; });
    return static_cast<double>(count) / h1_scores.size();
}

double micro_f_score(long long tp, long long fp, long long fn) {
    const long long denom = 2 * tp + fn + fp;
    return denom == 0 ? 1.0 : 2.0 * tp / static_cast<double>(denom);
}

std::vector<FscoreRow> run_fscore(const ExperimentConfig& cfg) {
    if (!cfg.samples_sweep.empty() && !cfg.sigma_w2_sweep.empty())
        throw std::invalid_argument(
            "choose one sweep: samples_sweep or sigma_w2_sweep");

    struct Point {
        std::string param;
        double value;
        int samples;
        double sigma_w2;
    };
    std::vector<Point> points;
    if (!cfg.samples_sweep.empty()) {
        for (int m : cfg.samples_sweep)
            points.push_back({"samples", static_cast<double>(m), m,
                              cfg.sigma_w2});
    } else if (!cfg.sigma_w2_sweep.empty()) {
        for (double w : cfg.sigma_w2_sweep)
            points.push_back({"sigma_w2", w, cfg.samples, w});
    } else {
        points.push_back({"samples", static_cast<double>(cfg.samples),
                          cfg.samples, cfg.sigma_w2});
    }

    struct Method {
        std::string name;
        GreedyMode mode;
        int beta;
    };
    std::vector<Method> methods{{"greedy", GreedyMode::full, 0}};
    for (int b : cfg.betas)
        methods.push_back(
            {"greedy-b" + std::to_string(b), GreedyMode::local, b});

    std::vector<FscoreRow> rows;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& pt = points[p];
        ExperimentConfig sub = cfg;
        // Separate the trial streams of each sweep point.
        sub.seed = Rng::derive(cfg.seed, 1000 + p);

        std::map<std::string, FscoreRow> acc;
        for (const auto& m : methods)
            acc[m.name] = {m.name, pt.param, pt.value, 0, 0, 0, 0.0,
                           cfg.trials};

        for (int trial = 0; trial < cfg.trials; ++trial) {
            const Trial t =
                make_trial(sub, cfg.n, pt.samples, pt.sigma_w2, trial, false);
            std::set<EdgeId> truth;
            for (const auto& e : t.hyp.removed_edges)
                truth.insert(edge_id(e));

            for (const auto& m : methods) {
                const auto est =
                    (m.mode == GreedyMode::full
                         ? greedy_identify(t.cov_h1, t.base, t.g.edges(),
                                           cfg.graph_filter(), cfg.sigma_x2,
                                           pt.sigma_w2,
                                           greedy_cfg_for(cfg, m.mode, m.beta))
                         : greedy_identify_local(
                               t.cov_h1, t.base, t.g.edges(),
                               cfg.graph_filter(), cfg.sigma_x2, pt.sigma_w2,
                               greedy_cfg_for(cfg, m.mode, m.beta)))
                        .removed;
                long long tp = 0;
                for (const auto& e : est) tp += truth.count(e);
                auto& row = acc[m.name];
                row.tp += tp;
                row.fp += static_cast<long long>(est.size()) - tp;
                row.fn += cfg.r_true - tp;
            }
        }
        for (const auto& m : methods) {
            auto row = acc[m.name];
            row.fscore = micro_f_score(row.tp, row.fp, row.fn);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<RuntimeRow> run_runtime(const ExperimentConfig& cfg) {
    struct Method {
        std::string name;
        GreedyMode mode;
        int beta;
    };
    std::vector<Method> methods{{"greedy", GreedyMode::full, 0}};
    for (int b : cfg.betas)
        methods.push_back(
            {"greedy-b" + std::to_string(b), GreedyMode::local, b});

    std::vector<RuntimeRow> rows;
    for (std::size_t p = 0; p < cfg.n_sweep.size(); ++p) {
        const int n = cfg.n_sweep[p];
        ExperimentConfig sub = cfg;
        sub.seed = Rng::derive(cfg.seed, 2000 + p);

        std::map<std::string, std::vector<double>> times;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const Trial t =
                make_trial(sub, n, cfg.samples, cfg.sigma_w2, trial, false);
            for (const auto& m : methods) {
                const auto gc = greedy_cfg_for(cfg, m.mode, m.beta);
                const auto start = std::chrono::steady_clock::now();
                if (m.mode == GreedyMode::full)
                    greedy_identify(t.cov_h1, t.base, t.g.edges(),
                                    cfg.graph_filter(), cfg.sigma_x2,
                                    cfg.sigma_w2, gc);
                else
                    greedy_identify_local(t.cov_h1, t.base, t.g.edges(),
                                          cfg.graph_filter(), cfg.sigma_x2,
                                          cfg.sigma_w2, gc);
                const std::chrono::duration<double> dt =
                    std::chrono::steady_clock::now() - start;
                times[m.name].push_back(dt.count());
            }
        }
        for (const auto& m : methods) {
            const double mean = mean_of(times[m.name]);
            rows.push_back({m.name, n, mean, std_of(times[m.name], mean),
                            cfg.trials});
        }
    }
    return rows;
}

std::string roc_csv(const std::vector<RocRow>& rows) {
    std::ostringstream out;
    out << "detector,threshold,pfa,pd,trials\n";
    for (const auto& r : rows)
        out << r.detector << ',' << format_double(r.threshold) << ','
            << format_double(r.pfa) << ',' << format_double(r.pd) << ','
            << r.trials << '\n';
    return out.str();
}

std::string fscore_csv(const std::vector<FscoreRow>& rows) {
    std::ostringstream out;
    out << "method,sweep_param,sweep_value,fscore,tp,fp,fn,trials\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.sweep_param << ','
            << format_double(r.sweep_value) << ',' << format_double(r.fscore)
            << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << r.trials
            << '\n';
    return out.str();
}

std::string runtime_csv(const std::vector<RuntimeRow>& rows) {
    std::ostringstream out;
    out << "method,n,mean_seconds,std_seconds,trials\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.n << ',' << format_double(r.mean_seconds)
            << ',' << format_double(r.std_seconds) << ',' << r.trials << '\n';
    return out.str();
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["graph_file"] = cfg.graph_file;
    doc["n"] = cfg.n;
    doc["k_per_side"] = cfg.k_per_side;
    doc["p_rewire"] = cfg.p_rewire;
    doc["weight_lo"] = cfg.weight_lo;
    doc["weight_hi"] = cfg.weight_hi;
    doc["filter"] = filter_name(cfg.filter);
    doc["alpha"] = cfg.alpha;
    doc["tau"] = cfg.tau;
    doc["sigma_x2"] = cfg.sigma_x2;
    doc["sigma_w2"] = cfg.sigma_w2;
    doc["samples"] = cfg.samples;
    doc["r_true"] = cfg.r_true;
    doc["trials"] = cfg.trials;
    doc["seed"] = cfg.seed;
    doc["detectors"] = cfg.detectors;
    doc["betas"] = cfg.betas;
    if (cfg.r_max) doc["r_max"] = *cfg.r_max;
    doc["threshold_grid"] = cfg.threshold_grid;
    doc["samples_sweep"] = cfg.samples_sweep;
    doc["sigma_w2_sweep"] = cfg.sigma_w2_sweep;
    doc["n_sweep"] = cfg.n_sweep;
    doc["band_b"] = cfg.band_b;
    return doc;
}

}  // namespace

std::string experiment_config_json(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

ExperimentConfig load_experiment_config(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& err) {
        throw std::runtime_error("bad config file " + path + ": " +
                                 err.what());
    }
    ExperimentConfig cfg;
    const json defaults = config_to_json(cfg);
    for (const auto& [key, value] : doc.items()) {
        if (key == "r_max") continue;  // optional, absent by default
        if (!defaults.contains(key))
            throw std::runtime_error("unknown config key '" + key + "'");
        (void)value;
    }

    const auto get = [&](const char* key, auto& field) {
        if (doc.contains(key)) doc.at(key).get_to(field);
    };
    get("graph_file", cfg.graph_file);
    get("n", cfg.n);
    get("k_per_side", cfg.k_per_side);
    get("p_rewire", cfg.p_rewire);
    get("weight_lo", cfg.weight_lo);
    get("weight_hi", cfg.weight_hi);
    if (doc.contains("filter")) {
        const auto name = doc.at("filter").get<std::string>();
        const auto kind = parse_filter(name);
        if (!kind) throw std::runtime_error("unknown filter '" + name + "'");
        cfg.filter = *kind;
    }
    get("alpha", cfg.alpha);
    get("tau", cfg.tau);
    get("sigma_x2", cfg.sigma_x2);
    get("sigma_w2", cfg.sigma_w2);
    get("samples", cfg.samples);
    get("r_true", cfg.r_true);
    get("trials", cfg.trials);
    get("seed", cfg.seed);
    get("detectors", cfg.detectors);
    get("betas", cfg.betas);
    if (doc.contains("r_max")) cfg.r_max = doc.at("r_max").get<int>();
    get("threshold_grid", cfg.threshold_grid);
    get("samples_sweep", cfg.samples_sweep);
    get("sigma_w2_sweep", cfg.sigma_w2_sweep);
    get("n_sweep", cfg.n_sweep);
    get("band_b", cfg.band_b);
    return cfg;
}

std::string run_manifest_json(const std::string& command,
                              const ExperimentConfig& cfg) {
    json doc;
    doc["command"] = command;
    doc["seed"] = cfg.seed;
    doc["config"] = config_to_json(cfg);
    std::ostringstream hash;
    hash << std::hex << fnv1a_hash(experiment_config_json(cfg));
    doc["config_hash"] = hash.str();
    doc["version"] = "0.1.0";
    return doc.dump(2) + "\n";
}

}  // namespace edgedrop
