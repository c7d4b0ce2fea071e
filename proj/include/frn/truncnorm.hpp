#pragma once

#include "frn/rng.hpp"
#include "frn/types.hpp"

namespace frn {

/// Draw from Normal(mean, sd^2) conditioned on the interval.  Inverse-CDF in
/// tail-complement form while the standardized bounds stay within 6 sd;
/// beyond that, shifted-exponential rejection (one-sided) or tilted-uniform
/// rejection (narrow two-sided) keep the draw finite and inside the interval.
/// Throws NumericalError on an empty interval.
double sample_truncated_normal(double mean, double sd, ConstraintInterval interval,
                               Rng& rng);

}  // namespace frn
