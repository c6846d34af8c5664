#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "edgedrop/laplacian.hpp"
#include "edgedrop/signal_model.hpp"

namespace edgedrop {

/// Data term of the local decision score: difference of pseudo-inverse
/// quadratic traces of the vertex_set-restricted output covariances,
/// unperturbed minus perturbed. With the full vertex set this is the global
/// LRT value of the single perturbation.
double phi1(const SampleCovariance& s, const LaplacianView& L,
            const Eigen::MatrixXd& perturbation,
            const std::vector<int>& vertex_set, const GraphFilter& f,
            double sigma_x2, double sigma_w2);

/// Penalty term: log pseudo-determinant ratio of the restricted covariances,
/// perturbed over unperturbed. With the full vertex set this is the global
/// penalty of the single perturbation.
double phi2(const LaplacianView& L, const Eigen::MatrixXd& perturbation,
            const std::vector<int>& vertex_set, const GraphFilter& f,
            double sigma_x2, double sigma_w2);

enum class GreedyMode { full, local };

struct GreedyConfig {
    GreedyMode mode = GreedyMode::full;
    int beta = 1;                ///< locality radius (local mode)
    std::optional<int> r_max;    ///< optional sparsity cap
    bool skip_bridges = true;    ///< skip disconnecting candidates when the
                                 ///< model covariance is singular
};

/// One audit record per search round: every candidate's score, the argmax,
/// and whether it was accepted.
struct GreedyIteration {
    int iteration = 0;
    std::vector<std::pair<EdgeId, double>> scores;  ///< sorted by edge
    EdgeId chosen{-1, -1};
    double chosen_score = 0.0;
    bool accepted = false;
    std::size_t search_set_size = 0;
};

struct GreedyResult {
    std::vector<EdgeId> removed;  ///< accepted edges in discovery order
    std::vector<GreedyIteration> trace;
};

/// Greedy identification: repeatedly disconnect the single edge whose
/// penalized single-edge score against the current topology is largest,
/// accept only strictly positive scores, and stop at the sparsity cap or
/// when no candidate improves. Ties prefer the lexicographically smallest
/// edge. Full mode searches every remaining edge each round with
/// whole-graph statistics.
GreedyResult greedy_identify(const SampleCovariance& s,
                             const LaplacianView& L0,
                             const std::vector<Edge>& base_edges,
                             const GraphFilter& f, double sigma_x2,
                             double sigma_w2, GreedyConfig cfg = {});

/// Neighborhood variant: each candidate edge is scored on the vertices
/// within `beta` hops of its endpoints only, and after each acceptance the
/// search set shrinks to the positive-scoring edges plus the edges whose
/// shortest-path neighborhoods contain one. With `beta` at least the graph
/// diameter this reproduces the full search exactly.
GreedyResult greedy_identify_local(const SampleCovariance& s,
                                   const LaplacianView& L0,
                                   const std::vector<Edge>& base_edges,
                                   const GraphFilter& f, double sigma_x2,
                                   double sigma_w2, GreedyConfig cfg);

/// Next search set: edges whose local score was strictly positive, plus
/// base edges whose endpoint shortest-path edge sets (radius beta, base
/// topology) contain a positive-scoring edge, minus the already-found set.
std::vector<EdgeId> update_search_set(
    const std::vector<EdgeId>& found,
    const std::vector<std::pair<EdgeId, double>>& scores, int n,
    const std::vector<EdgeId>& base_edges, int beta);

}  // namespace edgedrop
