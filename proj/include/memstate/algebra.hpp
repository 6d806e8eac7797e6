#pragma once

#include <cstdint>

#include "memstate/rng.hpp"
#include "memstate/state.hpp"

namespace memstate {

/// Grid size, mean activity, bundling threshold and seed for one run.
struct AlgebraParams {
  std::uint32_t dimension = 10000;
  double q = 1.0 / 3.0;
  double theta = 0.5;
  std::uint64_t seed = 0;

  /// Library-level check: dimension > 0, q and theta in [0, 1].
  void validate() const;
  /// Experiment range: 0 < q <= 1/2 and 1/2 <= theta < 1. Throws ConfigError
  /// naming the violated interval.
  void validate_experiment_range() const;

  friend bool operator==(const AlgebraParams&, const AlgebraParams&) = default;
};

/// Each site independently 1 with probability q.
State random_qstate(std::uint32_t dimension, double q, RngStream& rng);
State random_qstate(const AlgebraParams& params, RngStream& rng);

State one_vector(std::uint32_t dimension);
State complement(const State& x);

/// Fraction of active sites, popcount / N.
double mean_activity(const State& x);

/// Component-wise XNOR: a site is active iff both inputs agree there.
State bind(const State& x, const State& y);

/// Normalised Hamming distance, evaluated as 1 - mean_activity(bind(x, y))
/// from the same integer count, so that identity holds bit for bit.
double distance(const State& x, const State& y);

/// Stochastic threshold bundling. Agreeing sites pass through; each site
/// where the inputs differ becomes 1 with probability theta, drawn fresh from
/// `rng`. theta = 0 reduces to AND and theta = 1 to OR.
State bundle(const State& x, const State& y, double theta, RngStream& rng);

/// Flips every site independently with probability epsilon.
State perturb(const State& x, double epsilon, RngStream& rng);

/// Mean activity after left-folding k independent dense (q = 1/2) states:
/// theta - (theta - 1/2) * 2^(1-k).
double expected_bundle_activity(unsigned k, double theta);

/// Fixed point of the activity recursion when q-states are bundled one after
/// another: theta*q / (1 - theta*(1-q) - q*(1-theta)).
double asymptotic_activity(double q, double theta);

}  // namespace memstate
