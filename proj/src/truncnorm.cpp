#include "frn/truncnorm.hpp"

#include <algorithm>
#include <cmath>

namespace frn {

namespace {

constexpr double kTailSwitch = 6.0;
constexpr int kMaxRejections = 1 << 20;

// Robert-style one-sided tail sampler: X ~ a + Exp(lambda) accepted with
// probability exp(-(x - lambda)^2 / 2), valid for a > 0.
double tail_rejection(double a, Rng& rng) {
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (int it = 0; it < kMaxRejections; ++it) {
    const double x = a + rng.exponential(lambda);
    const double diff = x - lambda;
    if (std::log(rng.uniform_pos()) <= -0.5 * diff * diff) return x;
  }
  throw NumericalError("tail rejection failed to accept");
}

// Uniform proposal on [a, b] tilted by the normal density relative to the
// left endpoint; used for short intervals deep inside a tail (a > 0).
double tilted_uniform(double a, double b, Rng& rng) {
  for (int it = 0; it < kMaxRejections; ++it) {
    const double x = a + (b - a) * rng.uniform();
    if (std::log(rng.uniform_pos()) <= 0.5 * (a * a - x * x)) return x;
  }
  throw NumericalError("tilted uniform rejection failed to accept");
}

// Standardized draw on (a, b), a < b, with a and b possibly infinite.
double standard_truncated(double a, double b, Rng& rng) {
  if (a == -kInf && b == kInf) return rng.normal();

  // Deep right tail: a beyond the switch point (mirrored for the left tail).
  if (a > kTailSwitch) {
    if (b == kInf || b - a >= 1.0 / a) {
      for (int it = 0; it < kMaxRejections; ++it) {
        const double x = tail_rejection(a, rng);
        if (x <= b) return x;
      }
      throw NumericalError("two-sided tail rejection failed to accept");
    }
    return tilted_uniform(a, b, rng);
  }
  if (b < -kTailSwitch) return -standard_truncated(-b, -a, rng);

  // Moderate bounds: invert the CDF on whichever tail keeps the difference
  // of probabilities well conditioned.
  const double u = rng.uniform_pos();
  double x;
  if (a >= 0.0) {  // work with upper-tail probabilities
    const double qa = norm_cdf_c(a);
    const double qb = (b == kInf) ? 0.0 : norm_cdf_c(b);
    double q = qb + (qa - qb) * u;
    if (q <= 0.0) q = std::min(qa, 0.5);  // fully degenerate bracket
    x = -norm_quantile(q);
  } else if (b <= 0.0) {  // lower tail
    const double pa = (a == -kInf) ? 0.0 : norm_cdf(a);
    const double pb = norm_cdf(b);
    double p = pa + (pb - pa) * u;
    if (p <= 0.0) p = std::min(pb, 0.5);
    x = norm_quantile(p);
  } else {  // bracket straddles zero
    const double pa = (a == -kInf) ? 0.0 : norm_cdf(a);
    const double pb = (b == kInf) ? 1.0 : norm_cdf(b);
    x = norm_quantile(pa + (pb - pa) * u);
  }

  // floating-point guard: force the draw strictly inside the bracket
  if (!(x > a)) x = std::nextafter(a, kInf);
  if (!(x < b)) x = std::nextafter(b, -kInf);
  if (!(x > a)) x = 0.5 * (a + b);  // bracket thinner than one ulp
  return x;
}

}  // namespace

double sample_truncated_normal(double mean, double sd, ConstraintInterval interval,
                               Rng& rng) {
  if (!(sd > 0.0)) throw NumericalError("truncated normal needs sd > 0");
  if (!(interval.lo < interval.hi))
    throw NumericalError("empty truncation interval");

  if (interval.whole_line()) return rng.normal(mean, sd);

  const double a = (interval.lo - mean) / sd;
  const double b = (interval.hi - mean) / sd;
  double x = standard_truncated(a, b, rng);
  double y = mean + sd * x;
  // de-standardizing may round onto a bound; nudge back inside
  if (!(y > interval.lo)) y = std::nextafter(interval.lo, kInf);
  if (!(y < interval.hi)) y = std::nextafter(interval.hi, -kInf);
  if (!(y > interval.lo)) y = 0.5 * (interval.lo + interval.hi);
  return y;
}

}  // namespace frn
