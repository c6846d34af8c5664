#include "edgedrop/detectors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "edgedrop/greedy.hpp"
#include "edgedrop/spectral.hpp"

namespace edgedrop {

namespace {

std::vector<int> all_vertices(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

double logdet_spd(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("matrix is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::MatrixXd restrict_matrix(const Eigen::MatrixXd& m,
                                const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c)
            out(r, c) = m(idx[r], idx[c]);
    return out;
}

}  // namespace

int default_band(int n) { return (n + 3) / 4; }

LrtStatistic lrt_statistic(const SampleCovariance& s, const LaplacianView& L0,
                           const LaplacianView& Lk, const GraphFilter& f,
                           double sigma_x2, double sigma_w2) {
    const int n = L0.size();
    if (Lk.size() != n || s.matrix.rows() != n)
        throw std::invalid_argument("dimension mismatch");
    const auto all = all_vertices(n);
    const auto cov0 =
        psd_eigen(model_covariance_restricted(L0, f, sigma_x2, sigma_w2, all));
    const auto covk =
        psd_eigen(model_covariance_restricted(Lk, f, sigma_x2, sigma_w2, all));

    LrtStatistic out;
    out.value = cov0.pinv_quadratic_trace(s.matrix) -
                covk.pinv_quadratic_trace(s.matrix);
    out.penalty = covk.log_pseudo_det() - cov0.log_pseudo_det();
    out.penalized = out.value - out.penalty;
    return out;
}

FrequencyEnergies frequency_energies(const SignalBatch& batch,
                                     const LaplacianView& L) {
    if (batch.n() != L.size())
        throw std::invalid_argument("dimension mismatch");
    const Eigen::MatrixXd coeff = L.eigenvectors().transpose() * batch.samples;
    FrequencyEnergies out;
    out.psi = coeff.array().square().rowwise().mean();
    return out;
}

double lrt_spectral(const SignalBatch& batch, const LaplacianView& L0,
                    const LaplacianView& Lk, const GraphFilter& f,
                    double sigma_x2, double sigma_w2) {
    if (!(sigma_w2 > 0.0))
        throw std::invalid_argument(
            "spectral form needs sigma_w2 > 0; use the direct statistic");
    const int n = L0.size();
    if (Lk.size() != n || batch.n() != n)
        throw std::invalid_argument("dimension mismatch");

    const auto psi0 = frequency_energies(batch, L0).psi;
    const auto psik = frequency_energies(batch, Lk).psi;
    const auto weight = [&](const LaplacianView& L, int k) {
        const double h2 = f.transfer_sq(L.clamped_eigenvalue(k));
        return h2 / (sigma_w2 + sigma_x2 * h2);
    };
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        sum += weight(Lk, k) * psik[k] - weight(L0, k) * psi0[k];
    return sigma_x2 / sigma_w2 * sum;
}

double gmrf_lrt_noiseless(const SignalBatch& batch, const LaplacianView& L0,
                          const DisconnectionHypothesis& hyp,
                          double sigma_x2) {
    if (!(sigma_x2 > 0.0)) throw std::invalid_argument("sigma_x2 must be > 0");
    if (batch.n() != L0.size())
        throw std::invalid_argument("dimension mismatch");
    if (hyp.is_null()) return 0.0;

    const Eigen::MatrixXd lk = L0.matrix() - hyp.perturbation();
    double sum = 0.0;
    for (int t = 0; t < batch.m_count(); ++t) {
        const auto y = batch.samples.col(t);
        sum += y.dot(L0.matrix() * y) - y.dot(lk * y);
    }
    return sum / (sigma_x2 * batch.m_count());
}

double gmrf_lrt_edge_sum(const SignalBatch& batch,
                         const DisconnectionHypothesis& hyp,
                         double sigma_x2) {
    if (!(sigma_x2 > 0.0)) throw std::invalid_argument("sigma_x2 must be > 0");
    double sum = 0.0;
    for (const auto& e : hyp.removed_edges) {
        const auto diff =
            batch.samples.row(e.i) - batch.samples.row(e.j);
        sum += e.w * diff.array().square().sum();
    }
    return sum / (sigma_x2 * batch.m_count());
}

double gmrf_lrt_local_trace(const SampleCovariance& s,
                            const DisconnectionHypothesis& hyp,
                            double sigma_x2) {
    if (!(sigma_x2 > 0.0)) throw std::invalid_argument("sigma_x2 must be > 0");
    if (hyp.is_null()) return 0.0;
    const auto& set = hyp.affected_vertices;
    const Eigen::MatrixXd e_s = restrict_matrix(hyp.perturbation(), set);
    const Eigen::MatrixXd s_s = restrict_matrix(s.matrix, set);
    return (e_s * s_s).trace() / sigma_x2;
}

double gmrf_penalty_local(const LaplacianView& L0, const LaplacianView& Lk,
                          const std::vector<int>& vertex_set) {
    const int n = L0.size();
    if (Lk.size() != n) throw std::invalid_argument("dimension mismatch");
    if (vertex_set.empty()) return 0.0;
    const double shift = 1.0 / n;
    const auto local_term = [&](const LaplacianView& L) {
        Eigen::MatrixXd block =
            restrict_matrix(pseudo_inverse(L.matrix()), vertex_set);
        block.array() += shift;
        return logdet_spd(block);
    };
    return local_term(Lk) - local_term(L0);
}

double local_lrt(const SampleCovariance& s, const LaplacianView& L0,
                 const DisconnectionHypothesis& hyp, int beta,
                 const GraphFilter& f, double sigma_x2, double sigma_w2) {
    if (hyp.is_null()) return 0.0;
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");

    const int n = L0.size();
    std::vector<EdgeId> structure;
    for (const auto& e : L0.edges()) structure.emplace_back(e.i, e.j);

    std::vector<int> vertex_set;
    for (const auto& e : hyp.removed_edges) {
        for (int v : neighborhood(n, structure, e.i, beta))
            vertex_set.push_back(v);
        for (int v : neighborhood(n, structure, e.j, beta))
            vertex_set.push_back(v);
    }
    std::sort(vertex_set.begin(), vertex_set.end());
    vertex_set.erase(std::unique(vertex_set.begin(), vertex_set.end()),
                     vertex_set.end());
    if (vertex_set.empty()) throw std::invalid_argument("empty vertex set");

    return phi1(s, L0, hyp.perturbation(), vertex_set, f, sigma_x2, sigma_w2);
}

std::vector<DisconnectionHypothesis> enumerate_hypotheses(
    const LaplacianView& L0, int r_max, std::size_t max_hypotheses) {
    const auto edges = L0.edges();
    const int ne = static_cast<int>(edges.size());
    if (r_max < 1 || r_max > ne)
        throw std::invalid_argument("need 1 <= r_max <= edge count");

    // Candidate count sum_{r<=r_max} C(ne, r), saturating far above any
    // plausible cap.
    constexpr std::uint64_t kSaturation = std::uint64_t{1} << 60;
    std::uint64_t total = 0;
    bool saturated = false;
    for (int r = 1; r <= r_max; ++r) {
        std::uint64_t c = 1;
        for (int t = 0; t < r && !saturated; ++t) {
            if (c > kSaturation / ne) saturated = true;
            c = c * static_cast<std::uint64_t>(ne - t) / (t + 1);
        }
        if (saturated || total > kSaturation - c) {
            saturated = true;
            break;
        }
        total += c;
    }
    if (saturated || total > max_hypotheses)
        throw std::runtime_error(
            "hypothesis count " +
            (saturated ? std::string(">= 2^60") : std::to_string(total)) +
            " exceeds cap " + std::to_string(max_hypotheses));

    std::vector<DisconnectionHypothesis> out;
    out.reserve(total + 1);
    DisconnectionHypothesis null_hyp;
    null_hyp.n = L0.size();
    out.push_back(std::move(null_hyp));

    std::vector<EdgeId> subset;
    for (int r = 1; r <= r_max; ++r) {
        std::vector<int> pick(r);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            subset.clear();
            for (int p : pick) subset.emplace_back(edges[p].i, edges[p].j);
            out.push_back(apply_hypothesis(L0, subset).second);

            int k = r - 1;
            while (k >= 0 && pick[k] == ne - r + k) --k;
            if (k < 0) break;
            ++pick[k];
            for (int t = k + 1; t < r; ++t) pick[t] = pick[t - 1] + 1;
        }
    }
    return out;
}

MlDecision ml_decision(const SampleCovariance& s,
                       const std::vector<DisconnectionHypothesis>& hypotheses,
                       const LaplacianView& L0, const GraphFilter& f,
                       double sigma_x2, double sigma_w2) {
    if (hypotheses.empty() || !hypotheses.front().is_null())
        throw std::invalid_argument("hypotheses[0] must be the null");

    MlDecision best{0, 0.0};
    for (std::size_t k = 1; k < hypotheses.size(); ++k) {
        const auto lk =
            LaplacianView::from_matrix(L0.matrix() - hypotheses[k].perturbation());
        const double score =
            lrt_statistic(s, L0, lk, f, sigma_x2, sigma_w2).penalized;
        if (score > best.score) best = {static_cast<int>(k), score};
    }
    return best;
}

double naive_smoothness(const SignalBatch& batch, const LaplacianView& L0) {
    if (batch.n() != L0.size())
        throw std::invalid_argument("dimension mismatch");
    double sum = 0.0;
    for (int t = 0; t < batch.m_count(); ++t) {
        const auto y = batch.samples.col(t);
        sum += y.dot(L0.matrix() * y);
    }
    return sum / batch.m_count();
}

double bmsd(const SignalBatch& batch, const LaplacianView& L0, int band_b) {
    const int n = L0.size();
    if (band_b < 1 || band_b > n)
        throw std::invalid_argument("band must be in [1, n]");
    const auto psi = frequency_energies(batch, L0).psi;
    return psi.tail(n - band_b).sum();
}

double smsd(const SignalBatch& batch, const LaplacianView& L0,
            const LaplacianView& Lk, int band_b) {
    const int n = L0.size();
    if (band_b < 1 || band_b > n)
        throw std::invalid_argument("band must be in [1, n]");
    const auto psi0 = frequency_energies(batch, L0).psi;
    const auto psik = frequency_energies(batch, Lk).psi;
    return psi0.tail(n - band_b).sum() - psik.tail(n - band_b).sum();
}

}  // namespace edgedrop
