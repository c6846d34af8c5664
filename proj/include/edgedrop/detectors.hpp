#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "edgedrop/laplacian.hpp"
#include "edgedrop/signal_model.hpp"

namespace edgedrop {

/// Likelihood-ratio statistic for one candidate topology against the base:
///   value      Tr(Sigma(L0)^+ S) - Tr(Sigma(Lk)^+ S)
///   penalty    log pdet(Sigma(Lk)) - log pdet(Sigma(L0)); data-independent,
///              grows with the size of the disconnection set
///   penalized  value - penalty; exactly zero for the base topology
struct LrtStatistic {
    double value = 0.0;
    double penalty = 0.0;
    double penalized = 0.0;
};

struct DetectorConfig {
    double threshold = 0.0;  ///< decide the change when the score exceeds it
    std::optional<int> beta;
    int band_b = 0;  ///< 0 means the default band
};

/// Default low-frequency band size for the subspace detectors: ceil(n/4).
int default_band(int n);

/// Per-frequency average energies psi_n = (1/M) sum_m (U^T y[m])_n^2.
/// Nonnegative; their sum equals the mean squared sample norm.
struct FrequencyEnergies {
    Eigen::VectorXd psi;
};

LrtStatistic lrt_statistic(const SampleCovariance& s, const LaplacianView& L0,
                           const LaplacianView& Lk, const GraphFilter& f,
                           double sigma_x2, double sigma_w2);

FrequencyEnergies frequency_energies(const SignalBatch& batch,
                                     const LaplacianView& L);

/// The LRT value rewritten over the two frequency-energy profiles with
/// per-frequency weights h^2(lambda) / (sigma_w2 + sigma_x2 h^2(lambda)).
/// Requires sigma_w2 > 0 (nonsingular covariances); agrees with
/// `lrt_statistic(...).value` up to floating-point error.
double lrt_spectral(const SignalBatch& batch, const LaplacianView& L0,
                    const LaplacianView& Lk, const GraphFilter& f,
                    double sigma_x2, double sigma_w2);

/// Dirichlet-energy detector for the noiseless Markov-random-field model:
/// (1/(sigma_x2 M)) sum_m [Q_{L0}(y[m]) - Q_{Lk}(y[m])]. Computed per sample
/// from the two quadratic forms.
double gmrf_lrt_noiseless(const SignalBatch& batch, const LaplacianView& L0,
                          const DisconnectionHypothesis& hyp, double sigma_x2);

/// Same statistic as the per-edge sum of squared measurement differences
/// across the removed edges, weighted by the removed weights.
double gmrf_lrt_edge_sum(const SignalBatch& batch,
                         const DisconnectionHypothesis& hyp, double sigma_x2);

/// Same statistic from second moments restricted to the affected vertices:
/// (1/sigma_x2) Tr([E]_S [S]_S).
double gmrf_lrt_local_trace(const SampleCovariance& s,
                            const DisconnectionHypothesis& hyp,
                            double sigma_x2);

/// Penalty of a noiseless-gmrf hypothesis from affected-block data only:
/// log det([Lk^+]_S + (1/n) 1 1^T) - log det([L0^+]_S + (1/n) 1 1^T).
/// Equals the global pseudo-determinant ratio when both graphs are
/// connected.
double gmrf_penalty_local(const LaplacianView& L0, const LaplacianView& Lk,
                          const std::vector<int>& vertex_set);

/// Low-complexity LRT value computed from the measurements within `beta`
/// hops of the candidate edges only. Zero for the null hypothesis; equals
/// the full LRT value when the neighborhood covers every vertex.
double local_lrt(const SampleCovariance& s, const LaplacianView& L0,
                 const DisconnectionHypothesis& hyp, int beta,
                 const GraphFilter& f, double sigma_x2, double sigma_w2);

/// Null hypothesis followed by every removal set of size 1..r_max, ordered
/// by size then lexicographically. Throws (reporting the candidate count)
/// when the enumeration would exceed `max_hypotheses`.
std::vector<DisconnectionHypothesis> enumerate_hypotheses(
    const LaplacianView& L0, int r_max, std::size_t max_hypotheses);

struct MlDecision {
    int index = 0;     ///< chosen hypothesis; 0 is the null
    double score = 0;  ///< its penalized statistic (0 for the null)
};

/// Maximum-likelihood rule over the hypothesis list: the penalized LRT of
/// every candidate against the null's fixed score of zero, ties broken
/// toward the smallest index. hypotheses[0] must be the null.
MlDecision ml_decision(const SampleCovariance& s,
                       const std::vector<DisconnectionHypothesis>& hypotheses,
                       const LaplacianView& L0, const GraphFilter& f,
                       double sigma_x2, double sigma_w2);

/// Mean Dirichlet energy of the batch on the base topology; rises when the
/// data stops being smooth for it.
double naive_smoothness(const SignalBatch& batch, const LaplacianView& L0);

/// Subspace detectors comparing high-frequency energy (modes above the
/// first band_b) under the base and candidate topologies; `bmsd` uses the
/// base side only.
double smsd(const SignalBatch& batch, const LaplacianView& L0,
            const LaplacianView& Lk, int band_b);
double bmsd(const SignalBatch& batch, const LaplacianView& L0, int band_b);

}  // namespace edgedrop
