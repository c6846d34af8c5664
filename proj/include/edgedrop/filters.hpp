#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace edgedrop {

enum class FilterKind { gmrf, tikhonov, heat };

/// Spectral transfer-function family. All three responses are nonincreasing
/// in lambda for lambda > 0:
///   gmrf      1/sqrt(lambda), 0 at lambda = 0 (output is a Markov random
///             field with the Laplacian as precision matrix)
///   tikhonov  1/(1 + alpha*lambda), alpha > 0
///   heat      exp(-tau*lambda), tau > 0
struct GraphFilter {
    FilterKind kind = FilterKind::heat;
    double alpha = 0.5;  ///< tikhonov only
    double tau = 0.2;    ///< heat only

    static GraphFilter gmrf() { return {FilterKind::gmrf, 0.0, 0.0}; }
    static GraphFilter tikhonov(double alpha);
    static GraphFilter heat(double tau);

    /// Response at one graph frequency; lambda must be >= 0.
    double transfer(double lambda) const;

    /// Squared response; for the gmrf kind this is 1/lambda computed
    /// directly (0 at lambda = 0).
    double transfer_sq(double lambda) const;
};

std::string filter_name(FilterKind kind);
std::optional<FilterKind> parse_filter(std::string_view name);

}  // namespace edgedrop
