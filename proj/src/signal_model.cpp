#include "edgedrop/signal_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "edgedrop/rng.hpp"

namespace edgedrop {

SignalBatch generate(const SignalModel& model, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("need at least one sample");
    if (model.sigma_x2 < 0.0 || model.sigma_w2 < 0.0)
        throw std::invalid_argument("variances must be nonnegative");

    const int n = model.laplacian.size();
    const auto& u = model.laplacian.eigenvectors();
    Eigen::VectorXd h(n);
    for (int k = 0; k < n; ++k)
        h[k] = model.filter.transfer(model.laplacian.clamped_eigenvalue(k));
    const double sx = std::sqrt(model.sigma_x2);
    const double sw = std::sqrt(model.sigma_w2);

    SignalBatch batch;
    batch.samples.resize(n, m);
    Eigen::VectorXd x(n);
    for (int t = 0; t < m; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        for (int k = 0; k < n; ++k) x[k] = sx * rng.gaussian();
        // Filter in the eigenbasis: U (h(Lambda) (U^T x)).
        Eigen::VectorXd y = u * (h.cwiseProduct(u.transpose() * x));
        if (model.sigma_w2 > 0.0)
            for (int k = 0; k < n; ++k) y[k] += sw * rng.gaussian();
        batch.samples.col(t) = y;
    }
    return batch;
}

Eigen::MatrixXd model_covariance_restricted(
    const LaplacianView& L, const GraphFilter& f, double sigma_x2,
    double sigma_w2, const std::vector<int>& vertex_set) {
    const int n = L.size();
    if (vertex_set.empty()) throw std::invalid_argument("empty vertex set");
    for (int v : vertex_set)
        if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");

    const int s = static_cast<int>(vertex_set.size());
    Eigen::MatrixXd rows(s, n);
    for (int r = 0; r < s; ++r) rows.row(r) = L.eigenvectors().row(vertex_set[r]);

    Eigen::VectorXd scaled(n);
    for (int k = 0; k < n; ++k)
        scaled[k] = sigma_x2 * f.transfer_sq(L.clamped_eigenvalue(k));

    Eigen::MatrixXd cov = rows * scaled.asDiagonal() * rows.transpose();
    cov.diagonal().array() += sigma_w2;
    return cov;
}

Eigen::MatrixXd model_covariance(const SignalModel& model) {
    std::vector<int> all(model.laplacian.size());
    std::iota(all.begin(), all.end(), 0);
    return model_covariance_restricted(model.laplacian, model.filter,
                                       model.sigma_x2, model.sigma_w2, all);
}

SampleCovariance sample_covariance(const SignalBatch& batch) {
    if (batch.m_count() < 1)
        throw std::invalid_argument("need at least one sample");
    SampleCovariance s;
    s.m_count = batch.m_count();
    s.matrix = batch.samples * batch.samples.transpose() /
               static_cast<double>(batch.m_count());
    return s;
}

double log_likelihood(const SampleCovariance& s, const SignalModel& model) {
    const int n = model.laplacian.size();
    if (s.matrix.rows() != n)
        throw std::invalid_argument("dimension mismatch");
    const double m = static_cast<double>(s.m_count);
    const auto cov = psd_eigen(model_covariance(model));
    constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
    return -0.5 * m * n * kLog2Pi - 0.5 * m * cov.log_pseudo_det() -
           0.5 * m * cov.pinv_quadratic_trace(s.matrix);
}

}  // namespace edgedrop
