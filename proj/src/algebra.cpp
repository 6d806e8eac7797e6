#include "memstate/algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "memstate/errors.hpp"
#include "memstate/kernels.hpp"

namespace memstate {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

std::vector<std::uint64_t> words_for(std::uint32_t dimension) {
  if (dimension == 0) throw std::invalid_argument("state dimension must be positive");
  return std::vector<std::uint64_t>(State::word_count(dimension));
}

}  // namespace

void AlgebraParams::validate() const {
  if (dimension == 0) throw ConfigError("dimension must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
}

void AlgebraParams::validate_experiment_range() const {
  if (dimension == 0) throw ConfigError("dimension must be positive");
  if (!(q > 0.0 && q <= 0.5))
    throw ConfigError("q must lie in (0, 1/2], got " + std::to_string(q));
  if (!(theta >= 0.5 && theta < 1.0))
    throw ConfigError("theta must lie in [1/2, 1), got " + std::to_string(theta));
}

State random_qstate(std::uint32_t dimension, double q, RngStream& rng) {
  require_unit_interval(q, "q");
  auto words = words_for(dimension);
  kernels::parallel::bernoulli(words, rng.next_block(), Probability32::from_double(q),
                               State::tail_mask_for(dimension));
  return State(dimension, std::move(words));
}

State random_qstate(const AlgebraParams& params, RngStream& rng) {
  return random_qstate(params.dimension, params.q, rng);
}

State one_vector(std::uint32_t dimension) { return State::ones(dimension); }

State complement(const State& x) {
  std::vector<std::uint64_t> words(x.words().begin(), x.words().end());
  for (auto& w : words) w = ~w;
  return State(x.dimension(), std::move(words));
}

double mean_activity(const State& x) {
  return static_cast<double>(kernels::parallel::popcount(x.words())) /
         static_cast<double>(x.dimension());
}

State bind(const State& x, const State& y) {
  require_same_dimension(x, y);
  auto words = words_for(x.dimension());
  kernels::parallel::xnor(x.words(), y.words(), words, x.tail_mask());
  return State(x.dimension(), std::move(words));
}

double distance(const State& x, const State& y) {
  require_same_dimension(x, y);
  const std::uint64_t differing = kernels::parallel::popcount_xor(x.words(), y.words());
  const std::uint64_t agreeing = x.dimension() - differing;
  return 1.0 - static_cast<double>(agreeing) / static_cast<double>(x.dimension());
}

State bundle(const State& x, const State& y, double theta, RngStream& rng) {
  require_same_dimension(x, y);
  require_unit_interval(theta, "theta");
  auto words = words_for(x.dimension());
  kernels::parallel::bundle(x.words(), y.words(), words, rng.next_block(),
                            Probability32::from_double(theta));
  return State(x.dimension(), std::move(words));
}

State perturb(const State& x, double epsilon, RngStream& rng) {
  require_unit_interval(epsilon, "epsilon");
  auto words = words_for(x.dimension());
  kernels::parallel::flip(x.words(), words, rng.next_block(), Probability32::from_double(epsilon),
                          x.tail_mask());
  return State(x.dimension(), std::move(words));
}

double expected_bundle_activity(unsigned k, double theta) {
  if (k == 0) throw std::invalid_argument("expected_bundle_activity needs k >= 1");
  require_unit_interval(theta, "theta");
  return theta - (theta - 0.5) * std::ldexp(1.0, 1 - static_cast<int>(k));
}

double asymptotic_activity(double q, double theta) {
  require_unit_interval(q, "q");
  require_unit_interval(theta, "theta");
  const double denominator = 1.0 - theta * (1.0 - q) - q * (1.0 - theta);
  if (std::abs(denominator) < 1e-12)
    throw std::domain_error("asymptotic activity undefined: denominator vanishes at q=" +
                            std::to_string(q) + ", theta=" + std::to_string(theta));
  return theta * q / denominator;
}

}  // namespace memstate
