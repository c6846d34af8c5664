#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "edgedrop/filters.hpp"
#include "edgedrop/laplacian.hpp"
#include "edgedrop/spectral.hpp"

namespace edgedrop {

/// Measurement model: y[m] = h(L) x[m] + w[m] with x ~ N(0, sigma_x2 I) and
/// w ~ N(0, sigma_w2 I), mutually independent and i.i.d. over m. Fully
/// parameterizes the zero-mean Gaussian output distribution.
struct SignalModel {
    LaplacianView laplacian;
    GraphFilter filter;
    double sigma_x2 = 1.0;
    double sigma_w2 = 0.0;
};

/// M filtered measurement vectors, stored column-wise (N x M).
struct SignalBatch {
    Eigen::MatrixXd samples;

    int n() const { return static_cast<int>(samples.rows()); }
    int m_count() const { return static_cast<int>(samples.cols()); }
};

/// Second-moment matrix (1/M) sum_m y[m] y[m]^T; no mean subtraction since
/// the model is zero-mean.
struct SampleCovariance {
    Eigen::MatrixXd matrix;
    int m_count = 0;
};

/// Draws M samples from the model. Sample t consumes its own substream
/// (seed, t): first the N input gaussians, then the N noise gaussians (noise
/// skipped entirely when sigma_w2 == 0), so generation is reproducible and
/// safely parallelizable over samples.
SignalBatch generate(const SignalModel& model, int m, std::uint64_t seed);

/// Output covariance sigma_x2 h^2(L) + sigma_w2 I.
Eigen::MatrixXd model_covariance(const SignalModel& model);

/// The vertex_set x vertex_set block of the output covariance, assembled
/// from the corresponding eigenvector rows; identical to restricting the
/// full matrix.
Eigen::MatrixXd model_covariance_restricted(const LaplacianView& L,
                                            const GraphFilter& f,
                                            double sigma_x2, double sigma_w2,
                                            const std::vector<int>& vertex_set);

SampleCovariance sample_covariance(const SignalBatch& batch);

/// Gaussian log-likelihood of M samples with the given second moments:
/// -(MN/2) log 2pi - (M/2) log pdet(Sigma) - (M/2) Tr(Sigma^+ S), using the
/// pseudo-inverse and pseudo-determinant so singular covariances (noiseless
/// gmrf) are handled uniformly.
double log_likelihood(const SampleCovariance& s, const SignalModel& model);

}  // namespace edgedrop
