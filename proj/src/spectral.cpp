#include "edgedrop/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgedrop {

GraphFilter GraphFilter::tikhonov(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    GraphFilter f;
    f.kind = FilterKind::tikhonov;
    f.alpha = alpha;
    return f;
}

GraphFilter GraphFilter::heat(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    GraphFilter f;
    f.kind = FilterKind::heat;
    f.tau = tau;
    return f;
}

double GraphFilter::transfer(double lambda) const {
    switch (kind) {
        case FilterKind::gmrf:
            return lambda > 0.0 ? 1.0 / std::sqrt(lambda) : 0.0;
        case FilterKind::tikhonov:
            return 1.0 / (1.0 + alpha * lambda);
        case FilterKind::heat:
            return std::exp(-tau * lambda);
    }
    return 0.0;
}

double GraphFilter::transfer_sq(double lambda) const {
    if (kind == FilterKind::gmrf) return lambda > 0.0 ? 1.0 / lambda : 0.0;
    const double h = transfer(lambda);
    return h * h;
}

std::string filter_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::gmrf: return "gmrf";
        case FilterKind::tikhonov: return "tikhonov";
        case FilterKind::heat: return "heat";
    }
    return "?";
}

std::optional<FilterKind> parse_filter(std::string_view name) {
    if (name == "gmrf") return FilterKind::gmrf;
    if (name == "tikhonov") return FilterKind::tikhonov;
    if (name == "heat") return FilterKind::heat;
    return std::nullopt;
}

Eigen::VectorXd gft(const LaplacianView& L, const Eigen::VectorXd& signal) {
    if (signal.size() != L.size())
        throw std::invalid_argument("signal length must match vertex count");
    return L.eigenvectors().transpose() * signal;
}

Eigen::VectorXd igft(const LaplacianView& L, const Eigen::VectorXd& spectrum) {
    if (spectrum.size() != L.size())
        throw std::invalid_argument("spectrum length must match vertex count");
    return L.eigenvectors() * spectrum;
}

double dirichlet_energy(const LaplacianView& L, const Eigen::VectorXd& signal) {
    if (signal.size() != L.size())
        throw std::invalid_argument("signal length must match vertex count");
    return signal.dot(L.matrix() * signal);
}

Eigen::MatrixXd filter_matrix(const LaplacianView& L, const GraphFilter& f) {
    const int n = L.size();
    Eigen::VectorXd h(n);
    for (int k = 0; k < n; ++k) h[k] = f.transfer(L.clamped_eigenvalue(k));
    return L.eigenvectors() * h.asDiagonal() * L.eigenvectors().transpose();
}

double smoothness_ratio(const LaplacianView& L,
                        const std::function<double(double)>& transfer) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < L.size(); ++k) {
        const double lam = L.clamped_eigenvalue(k);
        const double h = transfer(lam);
        num += lam * h * h;
        den += lam;
    }
    if (!(den > 0.0))
        throw std::invalid_argument("graph has no edges; ratio undefined");
    return num / den;
}

double smoothness_ratio(const LaplacianView& L, const GraphFilter& f) {
    return smoothness_ratio(
        L, [&f](double lam) { return f.transfer(lam); });
}

PsdEigen psd_eigen(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    if (n == 0 || a.cols() != n)
        throw std::invalid_argument("matrix must be square and nonempty");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("matrix must be symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");

    PsdEigen out;
    out.vectors = solver.eigenvectors();
    out.values = solver.eigenvalues();
    const double lam_max = out.values.cwiseAbs().maxCoeff();
    out.tol = lam_max > 0.0
                  ? n * std::numeric_limits<double>::epsilon() * lam_max
                  : std::numeric_limits<double>::min();
    return out;
}

Eigen::MatrixXd PsdEigen::pseudo_inverse() const {
    const auto n = values.size();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k)
        if (values[k] > tol) inv[k] = 1.0 / values[k];
    return vectors * inv.asDiagonal() * vectors.transpose();
}

double PsdEigen::log_pseudo_det() const {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k)
        if (values[k] > tol) sum += std::log(values[k]);
    return sum;
}

double PsdEigen::pinv_quadratic_trace(const Eigen::MatrixXd& s) const {
    if (s.rows() != values.size() || s.cols() != values.size())
        throw std::invalid_argument("dimension mismatch");
    double sum = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values[k] > tol) {
            const auto v = vectors.col(k);
            sum += v.dot(s * v) / values[k];
        }
    }
    return sum;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
    return psd_eigen(a).pseudo_inverse();
}

double log_pseudo_det(const Eigen::MatrixXd& a) {
    return psd_eigen(a).log_pseudo_det();
}

double pseudo_det(const Eigen::MatrixXd& a) {
    return std::exp(log_pseudo_det(a));
}

}  // namespace edgedrop
