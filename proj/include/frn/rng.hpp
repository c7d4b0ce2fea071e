#pragma once

#include <cstdint>
#include <random>

namespace frn {

/// Standard normal CDF and complement, accurate in both tails.
double norm_cdf(double x);
double norm_cdf_c(double x);

/// Standard normal quantile (Wichura's PPND16 rational approximation),
/// accurate for p in (0, 1) down to the representable tails.
double norm_quantile(double p);

/// Derive an independent stream seed from a base seed and a stream index
/// (splitmix64 finalizer); used to give chains and replicates their own
/// deterministic streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Chain-local random source.  One owner per chain; never shared.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unif_(engine_); }  // [0, 1)

  /// Uniform on the open interval (0, 1); safe as a CDF argument.
  double uniform_pos() {
    double u;
    do {
      u = unif_(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  double chi_squared(double df) {
    std::gamma_distribution<double> g(df / 2.0, 2.0);
    return g(engine_);
  }

  /// Integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
    return d(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace frn
