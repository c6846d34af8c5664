#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <deque>
#include <set>

#include "edgedrop/graph.hpp"
#include "edgedrop/laplacian.hpp"
#include "edgedrop/rng.hpp"

using namespace edgedrop;

namespace {

// Reachability oracle independent of the spectral connectivity test.
bool bfs_connected(const WeightedGraph& g) {
    std::vector<bool> seen(g.n_vertices(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < g.n_vertices(); ++v) {
            if (!seen[v] && g.adjacency()(u, v) > 0.0) {
                seen[v] = true;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    return reached == g.n_vertices();
}

WeightedGraph random_connected_graph(int n, std::uint64_t seed) {
    return watts_strogatz(n, 2, 0.2, 0.5, 2.0, seed);
}

}  // namespace

TEST_CASE("build_graph constructs a symmetric adjacency") {
    const double w = 1.7;
    const auto g = WeightedGraph::build(2, {{0, 1, w}});
    CHECK(g.adjacency()(0, 0) == 0.0);
    CHECK(g.adjacency()(0, 1) == w);
    CHECK(g.adjacency()(1, 0) == w);
    CHECK(g.adjacency()(1, 1) == 0.0);
}

TEST_CASE("build_graph path degrees via diag(W 1)") {
    const auto g = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    const Eigen::VectorXd deg = g.adjacency().rowwise().sum();
    CHECK(deg[0] == 1.0);
    CHECK(deg[1] == 3.0);
    CHECK(deg[2] == 2.0);
}

TEST_CASE("build_graph accepts a random 50-vertex 100-edge instance") {
    Rng rng(7);
    std::set<EdgeId> used;
    std::vector<Edge> edges;
    while (edges.size() < 100) {
        const int i = static_cast<int>(rng.below(50));
        const int j = static_cast<int>(rng.below(50));
        if (i == j) continue;
        const auto id = make_edge_id(i, j);
        if (!used.insert(id).second) continue;
        edges.push_back({id.first, id.second, rng.uniform(0.1, 5.0)});
    }
    const auto g = WeightedGraph::build(50, edges);
    CHECK(g.edges().size() == 100);
    for (const auto& e : g.edges()) {
        CHECK(e.i < e.j);
        CHECK(e.w >= 0.1);
        CHECK(e.w <= 5.0);
    }
}

TEST_CASE("build_graph rejects bad edges and names the offender") {
    CHECK_THROWS_WITH_AS(WeightedGraph::build(3, {{1, 1, 1.0}}),
                         doctest::Contains("(1,1)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        WeightedGraph::build(3, {{0, 1, 1.0}, {1, 0, 2.0}}),
        doctest::Contains("duplicate"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(WeightedGraph::build(3, {{0, 1, 0.0}}),
                         doctest::Contains("weight"), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::build(3, {{0, 5, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("laplacian of a single edge") {
    const double w = 2.5;
    const auto L = laplacian(WeightedGraph::build(2, {{0, 1, w}}));
    CHECK(L.matrix()(0, 0) == w);
    CHECK(L.matrix()(0, 1) == -w);
    CHECK(L.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(L.eigenvalues()[1] == doctest::Approx(2 * w));
}

TEST_CASE("laplacian of the unit triangle has the known spectrum") {
    const auto L = laplacian(
        WeightedGraph::build(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}));
    CHECK(L.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(L.eigenvalues()[1] == doctest::Approx(3.0));
    CHECK(L.eigenvalues()[2] == doctest::Approx(3.0));
}

TEST_CASE("connected graphs have exactly one zero eigenvalue") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = random_connected_graph(12, seed);
        const auto L = laplacian(g);
        CHECK(L.zero_eig_count() == 1);
        CHECK(is_connected(L));
        // Rows sum to zero.
        const double row_err =
            (L.matrix() * Eigen::VectorXd::Ones(12)).cwiseAbs().maxCoeff();
        CHECK(row_err <= 1e-10 * L.matrix().norm());
        // Decomposition reconstructs the matrix.
        const Eigen::MatrixXd rebuilt = L.eigenvectors() *
                                        L.eigenvalues().asDiagonal() *
                                        L.eigenvectors().transpose();
        CHECK((rebuilt - L.matrix()).norm() <= 1e-10 * L.matrix().norm());
    }
}

TEST_CASE("single_edge_perturbation removes the only edge entirely") {
    const double w = 1.3;
    const auto L = laplacian(WeightedGraph::build(2, {{0, 1, w}}));
    const Eigen::MatrixXd e = single_edge_perturbation(L, 0, 1);
    CHECK(e(0, 0) == w);
    CHECK(e(0, 1) == -w);
    CHECK((L.matrix() - e).cwiseAbs().maxCoeff() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(e);
    CHECK(eig.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig.eigenvalues()[1] == doctest::Approx(2 * w));

    CHECK_THROWS_AS(single_edge_perturbation(L, 0, 0), std::invalid_argument);
}

TEST_CASE("removing an edge reproduces the rebuilt graph's laplacian") {
    const auto g = WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    const auto L = laplacian(g);
    const Eigen::MatrixXd e = single_edge_perturbation(L, 1, 2);
    const auto rebuilt = laplacian(WeightedGraph::build(3, {{0, 1, 1.0}}));
    CHECK((L.matrix() - e - rebuilt.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("apply_hypothesis identity case") {
    const auto L = laplacian(random_connected_graph(10, 3));
    const auto [lk, hyp] = apply_hypothesis(L, {});
    CHECK(hyp.is_null());
    CHECK(hyp.affected_vertices.empty());
    CHECK((lk.matrix() - L.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_hypothesis matches reconstruction for random subsets") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto g = random_connected_graph(14, seed);
        const auto L = laplacian(g);
        Rng rng(seed + 100);
        std::vector<EdgeId> removed;
        for (const auto& e : g.edges())
            if (rng.uniform() < 0.2) removed.push_back(edge_id(e));
        const auto [lk, hyp] = apply_hypothesis(L, removed);

        // Still a valid Laplacian.
        const double row_err =
            (lk.matrix() * Eigen::VectorXd::Ones(14)).cwiseAbs().maxCoeff();
        CHECK(row_err <= 1e-10 * (1.0 + lk.matrix().norm()));
        for (int i = 0; i < 14; ++i)
            for (int j = 0; j < 14; ++j)
                if (i != j) CHECK(lk.matrix()(i, j) <= 0.0);

        // Entrywise identical to rebuilding without the removed edges.
        std::set<EdgeId> gone(removed.begin(), removed.end());
        std::vector<Edge> kept;
        for (const auto& e : g.edges())
            if (!gone.count(edge_id(e))) kept.push_back(e);
        const auto direct = laplacian(WeightedGraph::build(14, kept));
        CHECK((lk.matrix() - direct.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

        // The update vanishes off the affected block.
        const Eigen::MatrixXd pert = hyp.perturbation();
        std::set<int> affected(hyp.affected_vertices.begin(),
                               hyp.affected_vertices.end());
        for (int i = 0; i < 14; ++i)
            for (int j = 0; j < 14; ++j)
                if (!affected.count(i) || !affected.count(j))
                    CHECK(pert(i, j) == 0.0);
    }
}

TEST_CASE("apply_hypothesis on a six-cycle collects the endpoints") {
    std::vector<Edge> cycle;
    for (int i = 0; i < 6; ++i)
        cycle.push_back({i, (i + 1) % 6, 1.0});
    const auto L = laplacian(WeightedGraph::build(6, cycle));
    const auto [lk, hyp] = apply_hypothesis(L, {{1, 2}, {3, 4}});
    CHECK(hyp.affected_vertices == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("apply_hypothesis rejects non-edges") {
    const auto L = laplacian(WeightedGraph::build(3, {{0, 1, 1.0}}));
    CHECK_THROWS_AS(apply_hypothesis(L, {{1, 2}}), std::invalid_argument);
}

TEST_CASE("spectral connectivity test agrees with reachability") {
    SUBCASE("path graph") {
        const auto L = laplacian(
            WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
        CHECK(is_connected(L));
    }
    SUBCASE("two disjoint edges") {
        const auto L = laplacian(
            WeightedGraph::build(4, {{0, 1, 1.0}, {2, 3, 1.0}}));
        CHECK_FALSE(is_connected(L));
        CHECK(L.zero_eig_count() == 2);
    }
    SUBCASE("cycle minus one edge stays connected") {
        std::vector<Edge> cycle;
        for (int i = 0; i < 6; ++i)
            cycle.push_back({i, (i + 1) % 6, 1.0});
        const auto L = laplacian(WeightedGraph::build(6, cycle));
        const auto lk = apply_hypothesis(L, {{0, 5}}).first;
        CHECK(is_connected(lk));
    }
    SUBCASE("random graphs against BFS") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto g = random_connected_graph(10, seed);
            CHECK(is_connected(laplacian(g)) == bfs_connected(g));
        }
    }
}

TEST_CASE("neighborhood semantics") {
    const auto path = WeightedGraph::build(
        4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    CHECK(neighborhood(path, 2, 0) == std::vector<int>{2});
    CHECK(neighborhood(path, 1, 1) == std::vector<int>{0, 1, 2});

    // Enough hops reaches the whole component, and growth is monotone.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = random_connected_graph(12, seed);
        std::size_t prev = 0;
        for (int beta = 0; beta <= 12; ++beta) {
            const auto nb = neighborhood(g, 3, beta);
            CHECK(nb.size() >= prev);
            prev = nb.size();
        }
        CHECK(prev == 12);
    }
}

TEST_CASE("path_edge_set semantics") {
    const auto star = WeightedGraph::build(
        5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
    CHECK(path_edge_set(star, 0, 0).empty());
    CHECK(path_edge_set(star, 0, 1).size() == 4);

    // On a four-cycle both two-hop shortest paths qualify, so all edges do.
    std::vector<Edge> cycle;
    for (int i = 0; i < 4; ++i) cycle.push_back({i, (i + 1) % 4, 1.0});
    const auto g4 = WeightedGraph::build(4, cycle);
    CHECK(path_edge_set(g4, 0, 2).size() == 4);

    // Path edges stay within the hop neighborhood.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = random_connected_graph(12, seed);
        for (int beta : {1, 2, 3}) {
            const auto nb = neighborhood(g, 5, beta);
            const std::set<int> inside(nb.begin(), nb.end());
            for (const auto& [u, v] : path_edge_set(g, 5, beta)) {
                CHECK(inside.count(u) == 1);
                CHECK(inside.count(v) == 1);
            }
        }
    }
}

TEST_CASE("watts_strogatz meets its contract") {
    const auto g = watts_strogatz(50, 2, 0.1, 0.1, 5.0, 42);
    CHECK(g.n_vertices() == 50);
    CHECK(g.edges().size() == 100);
    for (const auto& e : g.edges()) {
        CHECK(e.w >= 0.1);
        CHECK(e.w <= 5.0);
    }
    CHECK(bfs_connected(g));

    SUBCASE("no rewiring gives the exact ring lattice") {
        const auto ring = watts_strogatz(20, 2, 0.0, 1.0, 1.0, 5);
        CHECK(ring.edges().size() == 40);
        for (int i = 0; i < 20; ++i) {
            int degree = 0;
            for (int j = 0; j < 20; ++j)
                if (ring.adjacency()(i, j) > 0) ++degree;
            CHECK(degree == 4);
        }
    }

    SUBCASE("same seed reproduces the graph exactly") {
        const auto a = watts_strogatz(30, 2, 0.3, 0.1, 5.0, 9);
        const auto b = watts_strogatz(30, 2, 0.3, 0.1, 5.0, 9);
        CHECK((a.adjacency() - b.adjacency()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(watts_strogatz(4, 2, 0.1, 0.1, 5.0, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(watts_strogatz(50, 2, 1.5, 0.1, 5.0, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(watts_strogatz(50, 2, 0.1, 0.0, 5.0, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("eigenvalues only drop when more edges are removed") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = random_connected_graph(12, seed);
        const auto L = laplacian(g);
        Rng rng(seed);
        // Nested removal sets: the larger one adds one more edge.
        const auto ids = g.edge_ids();
        const auto a = ids[rng.below(ids.size())];
        auto b = ids[rng.below(ids.size())];
        while (b == a) b = ids[rng.below(ids.size())];

        const auto small = apply_hypothesis(L, {a}).first;
        const auto large = apply_hypothesis(L, {a, b}).first;
        for (int n = 0; n < 12; ++n)
            CHECK(large.eigenvalues()[n] <= small.eigenvalues()[n] + 1e-10);
    }
}
