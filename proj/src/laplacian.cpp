#include "edgedrop/laplacian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgedrop {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

LaplacianView LaplacianView::from_matrix(Eigen::MatrixXd m) {
    const auto n = m.rows();
    if (n == 0 || m.cols() != n)
        throw std::invalid_argument("Laplacian must be square and nonempty");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("Laplacian must be symmetric");
    if ((m * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("Laplacian rows must sum to zero");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && m(i, j) > 1e-10 * scale)
                throw std::invalid_argument(
                    "Laplacian off-diagonals must be nonpositive");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Laplacian eigendecomposition failed");

    LaplacianView view;
    view.matrix_ = std::move(m);
    view.eigenvectors_ = solver.eigenvectors();
    view.eigenvalues_ = solver.eigenvalues();

    const double lam_max = std::max(0.0, view.eigenvalues_.maxCoeff());
    const double psd_tol = std::max(1e-10, 100.0 * n * kEps * lam_max);
    if (view.eigenvalues_.minCoeff() < -psd_tol)
        throw std::invalid_argument("Laplacian is not positive semi-definite");
    for (Eigen::Index k = 0; k < n; ++k)
        if (view.eigenvalues_[k] < 0.0) view.eigenvalues_[k] = 0.0;

    // Numerical-rank rule: eigenvalues below n * eps * lambda_max are zero.
    view.rank_tol_ =
        lam_max > 0.0 ? n * kEps * lam_max : std::numeric_limits<double>::min();
    view.zero_eig_count_ = 0;
    for (Eigen::Index k = 0; k < n; ++k)
        if (view.eigenvalues_[k] < view.rank_tol_) ++view.zero_eig_count_;
    return view;
}

std::vector<Edge> LaplacianView::edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (matrix_(i, j) != 0.0) out.push_back({i, j, -matrix_(i, j)});
    return out;
}

LaplacianView laplacian(const WeightedGraph& g) {
    const auto& w = g.adjacency();
    Eigen::MatrixXd m = -w;
    m.diagonal() = w.rowwise().sum();
    return LaplacianView::from_matrix(std::move(m));
}

Eigen::MatrixXd single_edge_perturbation(const LaplacianView& L0, int i,
                                         int j) {
    const int n = L0.size();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("invalid vertex pair");
    const double off = L0.matrix()(i, j);
    if (off == 0.0)
        throw std::invalid_argument("(" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not an edge");
    const double w = -off;
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, i) = w;
    e(j, j) = w;
    e(i, j) = -w;
    e(j, i) = -w;
    return e;
}

Eigen::MatrixXd DisconnectionHypothesis::perturbation() const {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    for (const auto& edge : removed_edges) {
        e(edge.i, edge.i) += edge.w;
        e(edge.j, edge.j) += edge.w;
        e(edge.i, edge.j) -= edge.w;
        e(edge.j, edge.i) -= edge.w;
    }
    return e;
}

std::pair<LaplacianView, DisconnectionHypothesis> apply_hypothesis(
    const LaplacianView& L0, const std::vector<EdgeId>& removed) {
    DisconnectionHypothesis hyp;
    hyp.n = L0.size();

    std::vector<EdgeId> ids = removed;
    for (auto& id : ids) id = make_edge_id(id.first, id.second);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("duplicate edge in removal set");

    for (const auto& [i, j] : ids) {
        if (i < 0 || j >= hyp.n || L0.matrix()(i, j) == 0.0)
            throw std::invalid_argument("(" + std::to_string(i) + "," +
                                        std::to_string(j) +
                                        ") is not an edge of the base graph");
        hyp.removed_edges.push_back({i, j, -L0.matrix()(i, j)});
        hyp.affected_vertices.push_back(i);
        hyp.affected_vertices.push_back(j);
    }
    std::sort(hyp.affected_vertices.begin(), hyp.affected_vertices.end());
    hyp.affected_vertices.erase(std::unique(hyp.affected_vertices.begin(),
                                            hyp.affected_vertices.end()),
                                hyp.affected_vertices.end());

    Eigen::MatrixXd lk = L0.matrix() - hyp.perturbation();
    return {LaplacianView::from_matrix(std::move(lk)), std::move(hyp)};
}

bool is_connected(const LaplacianView& L) { return L.zero_eig_count() == 1; }

}  // namespace edgedrop
