#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "edgedrop/detectors.hpp"
#include "edgedrop/greedy.hpp"
#include "edgedrop/rng.hpp"

using namespace edgedrop;

namespace {

WeightedGraph random_connected_graph(int n, std::uint64_t seed) {
    return watts_strogatz(n, 2, 0.2, 0.5, 2.0, seed);
}

std::vector<EdgeId> pick_edges(const WeightedGraph& g, int count,
                               std::uint64_t seed) {
    Rng rng(seed);
    const auto ids = g.edge_ids();
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::set<EdgeId> chosen;
        while (static_cast<int>(chosen.size()) < count)
            chosen.insert(ids[rng.below(ids.size())]);
        std::vector<EdgeId> out(chosen.begin(), chosen.end());
        if (connected_after_removal(g.n_vertices(), ids, out)) return out;
    }
    REQUIRE(false);
    return {};
}

}  // namespace

TEST_CASE("restricted score terms vanish for the zero perturbation") {
    const auto g = random_connected_graph(8, 1);
    const auto L = laplacian(g);
    const GraphFilter f = GraphFilter::heat(0.2);
    const auto s = sample_covariance(generate({L, f, 1.0, 0.3}, 20, 2));
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(8, 8);
    const std::vector<int> part{1, 2, 5};
    CHECK(phi1(s, L, zero, part, f, 1.0, 0.3) == 0.0);
    CHECK(phi2(L, zero, part, f, 1.0, 0.3) == 0.0);
}

TEST_CASE("full-coverage restriction reproduces the global statistic") {
    const auto g = random_connected_graph(9, 2);
    const auto L0 = laplacian(g);
    const auto e = g.edges()[3];
    const auto pert = single_edge_perturbation(L0, e.i, e.j);
    const auto Lk = apply_hypothesis(L0, {edge_id(e)}).first;
    const GraphFilter f = GraphFilter::tikhonov(0.5);
    const auto s = sample_covariance(generate({Lk, f, 1.0, 0.4}, 30, 3));

    std::vector<int> everyone(9);
    for (int v = 0; v < 9; ++v) everyone[v] = v;
    const auto global = lrt_statistic(s, L0, Lk, f, 1.0, 0.4);
    const double p1 = phi1(s, L0, pert, everyone, f, 1.0, 0.4);
    const double p2 = phi2(L0, pert, everyone, f, 1.0, 0.4);
    CHECK(std::abs(p1 - global.value) <= 1e-8 * (1.0 + std::abs(global.value)));
    CHECK(std::abs(p2 - global.penalty) <=
          1e-8 * (1.0 + std::abs(global.penalty)));
}

TEST_CASE("two-vertex restriction against closed-form inverses") {
    const auto g = WeightedGraph::build(
        4, {{0, 1, 1.2}, {1, 2, 0.8}, {2, 3, 1.5}, {0, 3, 0.9}});
    const auto L = laplacian(g);
    const GraphFilter f = GraphFilter::heat(0.2);
    const double sx2 = 1.0, sw2 = 0.4;
    const auto s = sample_covariance(generate({L, f, sx2, sw2}, 25, 7));
    const auto pert = single_edge_perturbation(L, 1, 2);
    const std::vector<int> part{1, 2};

    // Oracle: restrict the squared filter matrices by explicit sums and use
    // the 2x2 inverse formula.
    const auto restricted_cov = [&](const LaplacianView& view) {
        Eigen::Matrix2d block;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                double sum = 0.0;
                for (int k = 0; k < 4; ++k)
                    sum += view.eigenvectors()(part[r], k) *
                           f.transfer_sq(view.clamped_eigenvalue(k)) *
                           view.eigenvectors()(part[c], k);
                block(r, c) = sx2 * sum + (r == c ? sw2 : 0.0);
            }
        }
        return block;
    };
    const auto inv2 = [](const Eigen::Matrix2d& m) {
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        Eigen::Matrix2d inv;
        inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        return Eigen::Matrix2d(inv / det);
    };
    Eigen::Matrix2d s_part;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) s_part(r, c) = s.matrix(part[r], part[c]);

    const Eigen::Matrix2d a = restricted_cov(L);
    const Eigen::Matrix2d b =
        restricted_cov(LaplacianView::from_matrix(L.matrix() - pert));
    const double oracle_phi1 =
        (inv2(a) * s_part).trace() - (inv2(b) * s_part).trace();
    const double oracle_phi2 =
        std::log(b.determinant()) - std::log(a.determinant());

    CHECK(phi1(s, L, pert, part, f, sx2, sw2) ==
          doctest::Approx(oracle_phi1).epsilon(1e-9));
    CHECK(phi2(L, pert, part, f, sx2, sw2) ==
          doctest::Approx(oracle_phi2).epsilon(1e-9));
}

TEST_CASE("greedy returns the empty set on unchanged data") {
    int hits = 0;
    const int trials = 30;
    for (int trial = 0; trial < trials; ++trial) {
        const auto g = watts_strogatz(20, 2, 0.2, 1.0, 3.0, 1100 + trial);
        const auto L0 = laplacian(g);
        const GraphFilter f = GraphFilter::heat(0.2);
        const auto s =
            sample_covariance(generate({L0, f, 1.0, 0.5}, 3000, trial));
        const auto out =
            greedy_identify(s, L0, g.edges(), f, 1.0, 0.5);
        if (out.removed.empty()) ++hits;
    }
    CHECK(hits >= static_cast<int>(0.9 * trials));
}

TEST_CASE("greedy recovers a single disconnected edge") {
    int hits = 0;
    const int trials = 30;
    for (int trial = 0; trial < trials; ++trial) {
        const auto g = watts_strogatz(20, 2, 0.2, 1.0, 3.0, 2100 + trial);
        const auto L0 = laplacian(g);
        const auto removed = pick_edges(g, 1, 60 + trial);
        const auto Lk = apply_hypothesis(L0, removed).first;
        const GraphFilter f = GraphFilter::heat(0.2);
        const auto s =
            sample_covariance(generate({Lk, f, 1.0, 0.5}, 3000, trial));
        const auto out = greedy_identify(s, L0, g.edges(), f, 1.0, 0.5);
        if (out.removed == removed) ++hits;
    }
    CHECK(hits >= static_cast<int>(0.9 * trials));
}

TEST_CASE("the exhaustive rule never scores below the greedy estimate") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = watts_strogatz(8, 2, 0.2, 0.5, 2.0, seed);
        const auto L0 = laplacian(g);
        const auto removed = pick_edges(g, 2, seed + 7);
        const auto Lk = apply_hypothesis(L0, removed).first;
        const GraphFilter f = GraphFilter::tikhonov(0.5);
        const auto s =
            sample_covariance(generate({Lk, f, 1.0, 0.1}, 3000, seed));

        GreedyConfig cfg;
        cfg.r_max = 2;
        const auto est =
            greedy_identify(s, L0, g.edges(), f, 1.0, 0.1, cfg).removed;
        double greedy_score = 0.0;
        if (!est.empty()) {
            const auto Lest = apply_hypothesis(L0, est).first;
            greedy_score = lrt_statistic(s, L0, Lest, f, 1.0, 0.1).penalized;
        }
        const auto hyps = enumerate_hypotheses(L0, 2, 10000);
        const auto oracle = ml_decision(s, hyps, L0, f, 1.0, 0.1);
        CHECK(oracle.score >= greedy_score - 1e-9);
    }
}

TEST_CASE("wide locality reproduces the full search exactly") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = random_connected_graph(12, 3300 + seed);
        const auto L0 = laplacian(g);
        const auto removed = pick_edges(g, 2, seed);
        const auto Lk = apply_hypothesis(L0, removed).first;
        const GraphFilter f = GraphFilter::heat(0.2);
        const auto s =
            sample_covariance(generate({Lk, f, 1.0, 0.25}, 2500, seed));

        GreedyConfig cfg;
        cfg.r_max = 3;
        const auto full =
            greedy_identify(s, L0, g.edges(), f, 1.0, 0.25, cfg);
        cfg.beta = diameter(g);
        const auto local =
            greedy_identify_local(s, L0, g.edges(), f, 1.0, 0.25, cfg);
        CHECK(full.removed == local.removed);
    }
}

TEST_CASE("search set update") {
    const auto g = WeightedGraph::build(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 4, 1.0}});
    const auto ids = g.edge_ids();

    SUBCASE("no positive scores empties the search set") {
        std::vector<std::pair<EdgeId, double>> scores;
        for (const auto& e : ids) scores.emplace_back(e, -1.0);
        CHECK(update_search_set({}, scores, 5, ids, 2).empty());
    }
    SUBCASE("zero radius keeps the positive edges only") {
        std::vector<std::pair<EdgeId, double>> scores;
        for (const auto& e : ids)
            scores.emplace_back(e, e == EdgeId{1, 2} ? 2.0 : -1.0);
        const auto next = update_search_set({}, scores, 5, ids, 0);
        CHECK(next == std::vector<EdgeId>{{1, 2}});
    }
    SUBCASE("found edges never reappear") {
        std::vector<std::pair<EdgeId, double>> scores;
        for (const auto& e : ids) scores.emplace_back(e, 1.0);
        const auto next = update_search_set({{1, 2}}, scores, 5, ids, 1);
        CHECK(std::find(next.begin(), next.end(), EdgeId{1, 2}) == next.end());
        CHECK(next.size() == ids.size() - 1);
    }
    SUBCASE("radius one pulls in the neighbors of a positive edge") {
        std::vector<std::pair<EdgeId, double>> scores;
        for (const auto& e : ids)
            scores.emplace_back(e, e == EdgeId{1, 2} ? 2.0 : -1.0);
        const auto next = update_search_set({}, scores, 5, ids, 1);
        // Edges incident to vertices 1 or 2 see the positive edge on their
        // one-hop shortest paths.
        CHECK(std::find(next.begin(), next.end(), EdgeId{0, 1}) != next.end());
        CHECK(std::find(next.begin(), next.end(), EdgeId{2, 3}) != next.end());
        CHECK(std::find(next.begin(), next.end(), EdgeId{0, 4}) == next.end());
    }
}

TEST_CASE("greedy trace is auditable and deterministic") {
    const auto g = random_connected_graph(14, 17);
    const auto L0 = laplacian(g);
    const auto removed = pick_edges(g, 2, 23);
    const auto Lk = apply_hypothesis(L0, removed).first;
    const GraphFilter f = GraphFilter::tikhonov(0.5);
    const auto s = sample_covariance(generate({Lk, f, 1.0, 0.3}, 1500, 4));

    GreedyConfig cfg;
    cfg.beta = 1;
    const auto a = greedy_identify_local(s, L0, g.edges(), f, 1.0, 0.3, cfg);
    const auto b = greedy_identify_local(s, L0, g.edges(), f, 1.0, 0.3, cfg);

    REQUIRE(a.trace.size() == b.trace.size());
    CHECK(a.removed == b.removed);
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].scores == b.trace[i].scores);
        CHECK(a.trace[i].chosen == b.trace[i].chosen);
    }

    // Every accepted edge carried a strictly positive score, sets only
    // shrink, and the loop is bounded by the edge count.
    CHECK(a.trace.size() <= g.edges().size() + 1);
    std::size_t accepted = 0;
    for (const auto& it : a.trace) {
        if (it.accepted) {
            CHECK(it.chosen_score > 0.0);
            ++accepted;
        }
    }
    CHECK(accepted == a.removed.size());
}

TEST_CASE("sparsity cap stops the search") {
    const auto g = random_connected_graph(14, 31);
    const auto L0 = laplacian(g);
    const auto removed = pick_edges(g, 3, 37);
    const auto Lk = apply_hypothesis(L0, removed).first;
    const GraphFilter f = GraphFilter::heat(0.2);
    const auto s = sample_covariance(generate({Lk, f, 1.0, 0.1}, 4000, 8));

    GreedyConfig cfg;
    cfg.r_max = 1;
    const auto out = greedy_identify(s, L0, g.edges(), f, 1.0, 0.1, cfg);
    CHECK(out.removed.size() == 1);
}

TEST_CASE("noiseless markov-field candidates that cut the graph are skipped") {
    // A path graph: every edge is a bridge, so nothing can be scored.
    const auto g = WeightedGraph::build(
        4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    const auto L0 = laplacian(g);
    const auto batch = generate({L0, GraphFilter::gmrf(), 1.0, 0.0}, 50, 3);
    const auto s = sample_covariance(batch);
    const auto out =
        greedy_identify(s, L0, g.edges(), GraphFilter::gmrf(), 1.0, 0.0);
    CHECK(out.removed.empty());
    REQUIRE(!out.trace.empty());
    CHECK(out.trace[0].scores.empty());  // all candidates skipped
}
