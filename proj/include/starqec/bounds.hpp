#pragma once

// Threshold bounds: KL divergence, Chernoff-Hoeffding failure bound, the exact
// binomial tail it bounds, and the Gilbert-Varshamov noise threshold.

#include <string>

namespace starqec::bounds {

struct FailureBound {
  long n = 0;
  double d = 0.0;
  double p = 0.0;
  double bound = 0.0;
};

/// x ln(x/y) + (1−x) ln((1−x)/(1−y)), with 0·ln 0 = 0.
double kl_divergence(double x, double y);

/// exp(−n·D(d/2n ‖ p)). Throws std::domain_error when p ≥ d/(2n), where the
/// bound is vacuous.
FailureBound chernoff_fail_bound(long n, double d, double p);

/// P[X ≥ ⌈d/2⌉] for X ~ Binomial(n, p), summed in log space.
double exact_fail_probability(long n, double d, double p);

inline constexpr double kGvDistanceRate = 0.1893;

/// Per-qubit noise tolerance d/(2n) at the Gilbert-Varshamov rate.
double gv_threshold();
/// Percentage truncated to one decimal, e.g. "9.4%".
std::string format_threshold_percent(double threshold);

/// 1/(γ²(1−2ε_fail)²), or 1/(γ²(1−ε_fail)²) for noise diagonal in the
/// computational basis.
double variance_bound_from_fail(double gamma, double eps_fail, bool diagonal_noise = false);

}  // namespace starqec::bounds
