#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "edgedrop/graph.hpp"

namespace edgedrop {

/// Symmetric graph Laplacian together with its cached eigendecomposition.
/// Eigenvalues are sorted ascending with tiny negatives clamped to zero;
/// eigenvalues below `rank_tolerance()` count as numerically zero, so
/// `zero_eig_count() == 1` exactly for connected graphs.
class LaplacianView {
public:
    LaplacianView() = default;  ///< empty view; fill via `from_matrix`

    /// Decomposes `m`, validating that it is a Laplacian: symmetric,
    /// positive semi-definite, zero row sums, nonpositive off-diagonals.
    static LaplacianView from_matrix(Eigen::MatrixXd m);

    int size() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    int zero_eig_count() const { return zero_eig_count_; }
    double rank_tolerance() const { return rank_tol_; }

    /// Eigenvalue with sub-tolerance values snapped to exactly zero; keeps
    /// spectral functions consistent with the zero-eigenvalue count.
    double clamped_eigenvalue(int n) const {
        const double lam = eigenvalues_[n];
        return lam < rank_tol_ ? 0.0 : lam;
    }

    /// Weighted edges recovered from the nonzero off-diagonal entries.
    std::vector<Edge> edges() const;

private:
    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd eigenvalues_;
    int zero_eig_count_ = 0;
    double rank_tol_ = 0.0;
};

/// Laplacian of `g`: diag(W 1) - W.
LaplacianView laplacian(const WeightedGraph& g);

/// Rank-one downdate that disconnects edge (i,j): w (e_i - e_j)(e_i - e_j)^T
/// with w the edge weight in `L0`. Exactly four nonzero entries. Rejects
/// pairs that are not edges of `L0`.
Eigen::MatrixXd single_edge_perturbation(const LaplacianView& L0, int i, int j);

/// A candidate set of disconnected edges: the removed edges (with their
/// original weights), the union of their endpoints, and the induced
/// Laplacian downdate. The downdate vanishes outside the affected block.
struct DisconnectionHypothesis {
    int n = 0;
    std::vector<Edge> removed_edges;     ///< sorted lexicographically
    std::vector<int> affected_vertices;  ///< sorted endpoint union

    bool is_null() const { return removed_edges.empty(); }

    /// Sum of the single-edge downdates; symmetric, PSD, singular.
    Eigen::MatrixXd perturbation() const;
};

/// Removes the edges in `removed` from `L0`, returning the re-decomposed
/// Laplacian and the hypothesis record. Rejects non-edges and duplicates.
std::pair<LaplacianView, DisconnectionHypothesis> apply_hypothesis(
    const LaplacianView& L0, const std::vector<EdgeId>& removed);

/// Connectivity read off the spectrum: exactly one numerically zero
/// eigenvalue.
bool is_connected(const LaplacianView& L);

}  // namespace edgedrop
