#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace edgedrop {

/// Undirected weighted edge with endpoints ordered i < j.
struct Edge {
    int i = 0;
    int j = 0;
    double w = 0.0;
};

/// Bare edge identity (i < j), used for hypothesis and search sets.
using EdgeId = std::pair<int, int>;

inline EdgeId edge_id(const Edge& e) { return {e.i, e.j}; }
inline EdgeId make_edge_id(int i, int j) {
    return i < j ? EdgeId{i, j} : EdgeId{j, i};
}

/// Undirected weighted graph with a dense symmetric adjacency matrix.
/// Immutable after construction; the edge list is kept sorted
/// lexicographically with i < j so downstream tie-breaking is deterministic.
class WeightedGraph {
public:
    WeightedGraph() = default;  ///< empty graph; fill via `build`

    /// Validates and normalizes the edge list. Rejects self-loops, duplicate
    /// edges, nonpositive weights, and out-of-range endpoints, naming the
    /// offending edge in the exception message.
    static WeightedGraph build(int n_vertices, std::vector<Edge> edges);

    int n_vertices() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Eigen::MatrixXd& adjacency() const { return adjacency_; }

    bool has_edge(int i, int j) const;
    double weight(int i, int j) const;

    std::vector<EdgeId> edge_ids() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    Eigen::MatrixXd adjacency_;
};

/// Vertices within `beta` hops of `i`, including `i` itself. Sorted.
std::vector<int> neighborhood(const WeightedGraph& g, int i, int beta);
std::vector<int> neighborhood(int n, const std::vector<EdgeId>& edges, int i,
                              int beta);

/// Edges lying on at least one shortest hop-count path from `i` to some
/// vertex within `beta` hops: (u,v) qualifies when hop(i,u) + 1 == hop(i,v)
/// <= beta or symmetrically. Sorted; empty for beta == 0.
std::vector<EdgeId> path_edge_set(const WeightedGraph& g, int i, int beta);
std::vector<EdgeId> path_edge_set(int n, const std::vector<EdgeId>& edges,
                                  int i, int beta);

/// BFS reachability of every vertex from vertex 0.
bool connected(int n, const std::vector<EdgeId>& edges);

/// True when the graph stays connected after deleting `removed`.
bool connected_after_removal(int n, const std::vector<EdgeId>& edges,
                             const std::vector<EdgeId>& removed);

/// Largest BFS eccentricity over all vertices (hop metric). The graph must
/// be connected.
int diameter(const WeightedGraph& g);

/// Small-world graph: a ring lattice joining each vertex to `k_per_side`
/// neighbors on each side, every lattice edge independently rewired with
/// probability `p_rewire` (avoiding self-loops and duplicates), and i.i.d.
/// uniform weights on [weight_lo, weight_hi]. Resamples until connected.
/// Deterministic for a given seed.
WeightedGraph watts_strogatz(int n, int k_per_side, double p_rewire,
                             double weight_lo, double weight_hi,
                             std::uint64_t seed);

}  // namespace edgedrop
