#pragma once

#include <Eigen/Core>
#include <functional>

#include "edgedrop/filters.hpp"
#include "edgedrop/laplacian.hpp"

namespace edgedrop {

/// Graph Fourier transform: projection onto the Laplacian eigenbasis,
/// U^T a. Coefficients are ordered by ascending eigenvalue.
Eigen::VectorXd gft(const LaplacianView& L, const Eigen::VectorXd& signal);

/// Inverse transform, U s; exact inverse of `gft`.
Eigen::VectorXd igft(const LaplacianView& L, const Eigen::VectorXd& spectrum);

/// Laplacian quadratic form a^T L a; zero for constant signals on connected
/// graphs and small for signals that vary slowly across edges.
double dirichlet_energy(const LaplacianView& L, const Eigen::VectorXd& signal);

/// Matrix form of the filter, U h(Lambda) U^T. Eigenvalues below the rank
/// tolerance are snapped to zero before applying the transfer function.
Eigen::MatrixXd filter_matrix(const LaplacianView& L, const GraphFilter& f);

/// Expected Dirichlet energy of the filter output divided by that of a white
/// input, in closed form over the spectrum:
/// sum_n lambda_n h^2(lambda_n) / sum_n lambda_n. Below one means the filter
/// smooths. Rejects graphs with zero total eigenvalue mass.
double smoothness_ratio(const LaplacianView& L, const GraphFilter& f);
double smoothness_ratio(const LaplacianView& L,
                        const std::function<double(double)>& transfer);

/// Eigendecomposition of a symmetric PSD matrix with its numerical-rank
/// split; the shared basis for pseudo-inverse, pseudo-determinant, and
/// quadratic traces so the three stay mutually consistent.
struct PsdEigen {
    Eigen::MatrixXd vectors;  ///< columns, eigenvalue-ascending
    Eigen::VectorXd values;
    double tol = 0.0;  ///< values <= tol count as zero

    Eigen::MatrixXd pseudo_inverse() const;

    /// Sum of log eigenvalues above tolerance (log of the product of the
    /// nonzero eigenvalues); 0 for the zero matrix.
    double log_pseudo_det() const;

    /// Tr(A^+ S) without forming the pseudo-inverse.
    double pinv_quadratic_trace(const Eigen::MatrixXd& s) const;
};

/// Rejects non-symmetric input.
PsdEigen psd_eigen(const Eigen::MatrixXd& a);

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a);
double log_pseudo_det(const Eigen::MatrixXd& a);
double pseudo_det(const Eigen::MatrixXd& a);

}  // namespace edgedrop
