#include "edgedrop/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

#include "edgedrop/rng.hpp"

namespace edgedrop {

namespace {

std::string edge_text(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::vector<std::vector<int>> adjacency_lists(int n,
                                              const std::vector<EdgeId>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

/// BFS hop distances from `source`, -1 where unreachable.
std::vector<int> hop_distances(const std::vector<std::vector<int>>& adj,
                               int source) {
    std::vector<int> hop(adj.size(), -1);
    std::deque<int> queue{source};
    hop[source] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (hop[v] < 0) {
                hop[v] = hop[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return hop;
}

}  // namespace

WeightedGraph WeightedGraph::build(int n_vertices, std::vector<Edge> edges) {
    if (n_vertices <= 0) throw std::invalid_argument("graph needs n >= 1");
    for (auto& e : edges) {
        if (e.i == e.j)
            throw std::invalid_argument("self-loop " + edge_text(e.i, e.j));
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= n_vertices)
            throw std::invalid_argument("edge endpoint out of range " +
                                        edge_text(e.i, e.j));
        if (!(e.w > 0.0))
            throw std::invalid_argument("nonpositive weight on edge " +
                                        edge_text(e.i, e.j));
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k - 1].i == edges[k].i && edges[k - 1].j == edges[k].j)
            throw std::invalid_argument("duplicate edge " +
                                        edge_text(edges[k].i, edges[k].j));
    }

    WeightedGraph g;
    g.n_ = n_vertices;
    g.edges_ = std::move(edges);
    g.adjacency_ = Eigen::MatrixXd::Zero(n_vertices, n_vertices);
    for (const auto& e : g.edges_) {
        g.adjacency_(e.i, e.j) = e.w;
        g.adjacency_(e.j, e.i) = e.w;
    }
    return g;
}

bool WeightedGraph::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) return false;
    return adjacency_(i, j) > 0.0;
}

double WeightedGraph::weight(int i, int j) const { return adjacency_(i, j); }

std::vector<EdgeId> WeightedGraph::edge_ids() const {
    std::vector<EdgeId> ids;
    ids.reserve(edges_.size());
    for (const auto& e : edges_) ids.emplace_back(e.i, e.j);
    return ids;
}

std::vector<int> neighborhood(int n, const std::vector<EdgeId>& edges, int i,
                              int beta) {
    if (i < 0 || i >= n) throw std::invalid_argument("vertex out of range");
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    const auto hop = hop_distances(adjacency_lists(n, edges), i);
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (hop[v] >= 0 && hop[v] <= beta) out.push_back(v);
    return out;
}

std::vector<int> neighborhood(const WeightedGraph& g, int i, int beta) {
    return neighborhood(g.n_vertices(), g.edge_ids(), i, beta);
}

std::vector<EdgeId> path_edge_set(int n, const std::vector<EdgeId>& edges,
                                  int i, int beta) {
    if (i < 0 || i >= n) throw std::invalid_argument("vertex out of range");
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    const auto hop = hop_distances(adjacency_lists(n, edges), i);
    std::vector<EdgeId> out;
    for (const auto& [u, v] : edges) {
        if (hop[u] < 0 || hop[v] < 0) continue;
        const bool forward = hop[u] + 1 == hop[v] && hop[v] <= beta;
        const bool backward = hop[v] + 1 == hop[u] && hop[u] <= beta;
        if (forward || backward) out.emplace_back(u, v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EdgeId> path_edge_set(const WeightedGraph& g, int i, int beta) {
    return path_edge_set(g.n_vertices(), g.edge_ids(), i, beta);
}

bool connected(int n, const std::vector<EdgeId>& edges) {
    if (n <= 1) return true;
    const auto hop = hop_distances(adjacency_lists(n, edges), 0);
    return std::all_of(hop.begin(), hop.end(), [](int h) { return h >= 0; });
}

bool connected_after_removal(int n, const std::vector<EdgeId>& edges,
                             const std::vector<EdgeId>& removed) {
    std::set<EdgeId> gone(removed.begin(), removed.end());
    std::vector<EdgeId> kept;
    kept.reserve(edges.size());
    for (const auto& e : edges)
        if (!gone.count(e)) kept.push_back(e);
    return connected(n, kept);
}

int diameter(const WeightedGraph& g) {
    const auto adj = adjacency_lists(g.n_vertices(), g.edge_ids());
    int diam = 0;
    for (int v = 0; v < g.n_vertices(); ++v) {
        const auto hop = hop_distances(adj, v);
        for (int h : hop) {
            if (h < 0) throw std::invalid_argument("graph is not connected");
            diam = std::max(diam, h);
        }
    }
    return diam;
}

WeightedGraph watts_strogatz(int n, int k_per_side, double p_rewire,
                             double weight_lo, double weight_hi,
                             std::uint64_t seed) {
    if (k_per_side < 1) throw std::invalid_argument("k_per_side must be >= 1");
    if (n <= 2 * k_per_side)
        throw std::invalid_argument("need n > 2*k_per_side");
    if (p_rewire < 0.0 || p_rewire > 1.0)
        throw std::invalid_argument("p_rewire must be in [0,1]");
    if (!(weight_lo > 0.0) || weight_lo > weight_hi)
        throw std::invalid_argument("need 0 < weight_lo <= weight_hi");

    Rng rng(seed);
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        std::vector<EdgeId> lattice;
        for (int s = 1; s <= k_per_side; ++s) {
            for (int i = 0; i < n; ++i) {
                const auto e = make_edge_id(i, (i + s) % n);
                adj[e.first][e.second] = adj[e.second][e.first] = true;
                lattice.push_back(e);
            }
        }
        // Rewire pass in lattice construction order; the left endpoint of
        // each lattice edge is kept and its partner redrawn.
        std::size_t idx = 0;
        for (int s = 1; s <= k_per_side; ++s) {
            for (int i = 0; i < n; ++i, ++idx) {
                if (rng.uniform() >= p_rewire) continue;
                const auto old_edge = lattice[idx];
                int target = -1;
                for (int tries = 0; tries < 8 * n; ++tries) {
                    const int t = static_cast<int>(rng.below(n));
                    if (t != i && !adj[i][t]) {
                        target = t;
                        break;
                    }
                }
                if (target < 0) continue;  // vertex saturated; keep the edge
                adj[old_edge.first][old_edge.second] = false;
                adj[old_edge.second][old_edge.first] = false;
                adj[i][target] = adj[target][i] = true;
                lattice[idx] = make_edge_id(i, target);
            }
        }

        std::vector<EdgeId> structure;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (adj[i][j]) structure.emplace_back(i, j);

        // Weights assigned in sorted edge order so the draw sequence is a
        // pure function of the structure.
        std::vector<Edge> edges;
        edges.reserve(structure.size());
        for (const auto& [i, j] : structure)
            edges.push_back({i, j, rng.uniform(weight_lo, weight_hi)});

        if (!connected(n, structure)) continue;
        return WeightedGraph::build(n, std::move(edges));
    }
    throw std::runtime_error(
        "failed to generate a connected graph; check parameters");
}

}  // namespace edgedrop
