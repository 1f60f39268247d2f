#include "starqec/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace starqec::bounds {

namespace {

double xlogx_ratio(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

}  // namespace

double kl_divergence(double x, double y) {
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("KL divergence needs 0 < y < 1");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("KL divergence needs 0 <= x <= 1");
  return xlogx_ratio(x, y) + xlogx_ratio(1.0 - x, 1.0 - y);
}

FailureBound chernoff_fail_bound(long n, double d, double p) {
  if (n <= 0 || !(d > 0.0)) throw std::invalid_argument("Chernoff bound needs n > 0 and d > 0");
  const double rate = d / (2.0 * static_cast<double>(n));
  if (!(p >= 0.0) || p >= rate) {
    throw std::domain_error("Chernoff bound is vacuous for p >= d/(2n)");
  }
  FailureBound out{n, d, p, 0.0};
  out.bound = p == 0.0 ? 0.0 : std::exp(-static_cast<double>(n) * kl_divergence(rate, p));
  return out;
}

double exact_fail_probability(long n, double d, double p) {
  if (n <= 0 || n > 10000) throw std::invalid_argument("exact tail supports 0 < n <= 10000");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  const long k0 = static_cast<long>(std::ceil(d / 2.0));
  if (k0 > n) return 0.0;
  if (p == 0.0) return k0 <= 0 ? 1.0 : 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double nn = static_cast<double>(n);
  // log-sum-exp over the tail terms
  double max_term = -INFINITY;
  for (long k = std::max(k0, 0L); k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double t = std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) +
                     kk * lp + (nn - kk) * lq;
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (long k = std::max(k0, 0L); k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double t = std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) +
                     kk * lp + (nn - kk) * lq;
    sum += std::exp(t - max_term);
  }
  return std::min(1.0, std::exp(max_term) * sum);
}

double gv_threshold() { return kGvDistanceRate / 2.0; }

std::string format_threshold_percent(double threshold) {
  const double tenths = std::floor(threshold * 1000.0 + 1e-9);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", tenths / 10.0);
  return buf;
}

double variance_bound_from_fail(double gamma, double eps_fail, bool diagonal_noise) {
  if (!(gamma > 0.0)) throw std::domain_error("variance bound needs gamma > 0");
  if (!(eps_fail >= 0.0 && eps_fail <= 0.5)) throw std::domain_error("eps_fail must lie in [0, 1/2]");
  const double contrast = diagonal_noise ? 1.0 - eps_fail : 1.0 - 2.0 * eps_fail;
  if (contrast <= 0.0) throw std::domain_error("variance bound is unbounded at eps_fail = 1/2");
  return 1.0 / (gamma * gamma * contrast * contrast);
}

}  // namespace starqec::bounds
