#include "edgedrop/greedy.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "edgedrop/spectral.hpp"

namespace edgedrop {

namespace {

Eigen::MatrixXd restrict_matrix(const Eigen::MatrixXd& m,
                                const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c)
            out(r, c) = m(idx[r], idx[c]);
    return out;
}

std::vector<int> sorted_union(const std::vector<int>& a,
                              const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
    return out;
}

// Unperturbed side of the score for one vertex set; shared by every
// candidate with the same locality within an iteration.
struct RestrictedBase {
    Eigen::MatrixXd s_res;
    double trace0 = 0.0;
    double logdet0 = 0.0;
};

RestrictedBase make_base(const SampleCovariance& s, const LaplacianView& L,
                         const std::vector<int>& vertex_set,
                         const GraphFilter& f, double sigma_x2,
                         double sigma_w2) {
    RestrictedBase base;
    const auto cov = psd_eigen(
        model_covariance_restricted(L, f, sigma_x2, sigma_w2, vertex_set));
    base.s_res = restrict_matrix(s.matrix, vertex_set);
    base.trace0 = cov.pinv_quadratic_trace(base.s_res);
    base.logdet0 = cov.log_pseudo_det();
    return base;
}

GreedyResult run_greedy(const SampleCovariance& s, const LaplacianView& L0,
                        const std::vector<Edge>& base_edges,
                        const GraphFilter& f, double sigma_x2, double sigma_w2,
                        const GreedyConfig& cfg) {
    const int n = L0.size();
    if (s.matrix.rows() != n) throw std::invalid_argument("dimension mismatch");
    const bool local = cfg.mode == GreedyMode::local;
    if (local && cfg.beta < 0) throw std::invalid_argument("beta must be >= 0");
    if (cfg.r_max && *cfg.r_max < 1)
        throw std::invalid_argument("r_max must be >= 1");

    std::vector<EdgeId> base_ids;
    base_ids.reserve(base_edges.size());
    for (const auto& e : base_edges) base_ids.push_back(edge_id(e));
    std::sort(base_ids.begin(), base_ids.end());

    const std::vector<int> everyone = [&] {
        std::vector<int> v(n);
        std::iota(v.begin(), v.end(), 0);
        return v;
    }();

    // Candidate localities depend only on the base topology; cache them
    // across iterations.
    std::map<EdgeId, std::vector<int>> locality;
    const auto vertex_set_for = [&](EdgeId e) -> const std::vector<int>& {
        if (!local) return everyone;
        auto it = locality.find(e);
        if (it == locality.end()) {
            auto set =
                sorted_union(neighborhood(n, base_ids, e.first, cfg.beta),
                             neighborhood(n, base_ids, e.second, cfg.beta));
            it = locality.emplace(e, std::move(set)).first;
        }
        return it->second;
    };

    const bool singular_model = sigma_w2 == 0.0 && f.kind == FilterKind::gmrf;

    GreedyResult result;
    LaplacianView current = L0;
    std::vector<EdgeId> structure = base_ids;
    std::vector<EdgeId> search = base_ids;

    for (int iter = 0; !search.empty(); ++iter) {
        GreedyIteration rec;
        rec.iteration = iter;
        rec.search_set_size = search.size();

        std::map<std::vector<int>, RestrictedBase> base_cache;
        EdgeId best{-1, -1};
        double best_score = -std::numeric_limits<double>::infinity();
        for (const auto& e : search) {
            if (singular_model && cfg.skip_bridges &&
                !connected_after_removal(n, structure, {e}))
                continue;
            const auto& vs = vertex_set_for(e);
            auto it = base_cache.find(vs);
            if (it == base_cache.end())
                it = base_cache
                         .emplace(vs, make_base(s, current, vs, f, sigma_x2,
                                                sigma_w2))
                         .first;
            const RestrictedBase& base = it->second;

            const Eigen::MatrixXd pert =
                single_edge_perturbation(current, e.first, e.second);
            // TODO: candidate spectra are recomputed from scratch here; a
            // rank-one eigenvalue-update scheme would cut the per-candidate
            // cost.
            const auto perturbed = LaplacianView::from_matrix(
                current.matrix() - pert);
            const auto covk = psd_eigen(model_covariance_restricted(
                perturbed, f, sigma_x2, sigma_w2, vs));
            const double data_term =
                base.trace0 - covk.pinv_quadratic_trace(base.s_res);
            const double penalty_term = covk.log_pseudo_det() - base.logdet0;
            const double score = data_term - penalty_term;
            rec.scores.emplace_back(e, score);
            // Strict comparison over the sorted search set keeps ties on the
            // lexicographically smallest edge.
            if (score > best_score) {
                best = e;
                best_score = score;
            }
        }

        if (best.first < 0) {
            result.trace.push_back(std::move(rec));
            break;  // every candidate skipped
        }
        rec.chosen = best;
        rec.chosen_score = best_score;
        rec.accepted = best_score > 0.0;
        if (!rec.accepted) {
            result.trace.push_back(std::move(rec));
            break;
        }

        result.removed.push_back(best);
        current = LaplacianView::from_matrix(
            current.matrix() -
            single_edge_perturbation(current, best.first, best.second));
        structure.erase(
            std::find(structure.begin(), structure.end(), best));

        if (local)
            search = update_search_set(result.removed, rec.scores, n, base_ids,
                                       cfg.beta);
        else
            search.erase(std::find(search.begin(), search.end(), best));
        result.trace.push_back(std::move(rec));

        if (cfg.r_max &&
            static_cast<int>(result.removed.size()) >= *cfg.r_max)
            break;
    }
    return result;
}

}  // namespace

double phi1(const SampleCovariance& s, const LaplacianView& L,
            const Eigen::MatrixXd& perturbation,
            const std::vector<int>& vertex_set, const GraphFilter& f,
            double sigma_x2, double sigma_w2) {
    if (vertex_set.empty()) throw std::invalid_argument("empty vertex set");
    const auto cov0 = psd_eigen(
        model_covariance_restricted(L, f, sigma_x2, sigma_w2, vertex_set));
    const auto perturbed =
        LaplacianView::from_matrix(L.matrix() - perturbation);
    const auto covk = psd_eigen(model_covariance_restricted(
        perturbed, f, sigma_x2, sigma_w2, vertex_set));
    const Eigen::MatrixXd s_res = restrict_matrix(s.matrix, vertex_set);
    return cov0.pinv_quadratic_trace(s_res) -
           covk.pinv_quadratic_trace(s_res);
}

double phi2(const LaplacianView& L, const Eigen::MatrixXd& perturbation,
            const std::vector<int>& vertex_set, const GraphFilter& f,
            double sigma_x2, double sigma_w2) {
    if (vertex_set.empty()) throw std::invalid_argument("empty vertex set");
    const auto cov0 = psd_eigen(
        model_covariance_restricted(L, f, sigma_x2, sigma_w2, vertex_set));
    const auto perturbed =
        LaplacianView::from_matrix(L.matrix() - perturbation);
    const auto covk = psd_eigen(model_covariance_restricted(
        perturbed, f, sigma_x2, sigma_w2, vertex_set));
    return covk.log_pseudo_det() - cov0.log_pseudo_det();
}

GreedyResult greedy_identify(const SampleCovariance& s,
                             const LaplacianView& L0,
                             const std::vector<Edge>& base_edges,
                             const GraphFilter& f, double sigma_x2,
                             double sigma_w2, GreedyConfig cfg) {
    cfg.mode = GreedyMode::full;
    return run_greedy(s, L0, base_edges, f, sigma_x2, sigma_w2, cfg);
}

GreedyResult greedy_identify_local(const SampleCovariance& s,
                                   const LaplacianView& L0,
                                   const std::vector<Edge>& base_edges,
                                   const GraphFilter& f, double sigma_x2,
                                   double sigma_w2, GreedyConfig cfg) {
    cfg.mode = GreedyMode::local;
    return run_greedy(s, L0, base_edges, f, sigma_x2, sigma_w2, cfg);
}

std::vector<EdgeId> update_search_set(
    const std::vector<EdgeId>& found,
    const std::vector<std::pair<EdgeId, double>>& scores, int n,
    const std::vector<EdgeId>& base_edges, int beta) {
    std::set<EdgeId> positives;
    for (const auto& [e, score] : scores)
        if (score > 0.0) positives.insert(e);

    std::set<EdgeId> next = positives;
    if (beta > 0 && !positives.empty()) {
        std::map<int, std::vector<EdgeId>> path_sets;
        const auto paths_of = [&](int v) -> const std::vector<EdgeId>& {
            auto it = path_sets.find(v);
            if (it == path_sets.end())
                it = path_sets.emplace(v, path_edge_set(n, base_edges, v, beta))
                         .first;
            return it->second;
        };
        const auto touches_positive = [&](int v) {
            const auto& ps = paths_of(v);
            return std::any_of(ps.begin(), ps.end(), [&](const EdgeId& e) {
                return positives.count(e) > 0;
            });
        };
        for (const auto& e : base_edges) {
            if (next.count(e)) continue;
            if (touches_positive(e.first) || touches_positive(e.second))
                next.insert(e);
        }
    }
    for (const auto& e : found) next.erase(e);
    return {next.begin(), next.end()};
}

}  // namespace edgedrop
