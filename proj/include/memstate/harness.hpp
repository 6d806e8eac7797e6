#pragma once

#include <span>
#include <string>
#include <vector>

#include "memstate/bit_image.hpp"
#include "memstate/config.hpp"
#include "memstate/results.hpp"

namespace memstate {

// Seeded batch experiments. Trials run concurrently (config.workers threads),
// each on its own stream derived from (seed, experiment, cell, trial), and are
// averaged in trial order, so outputs do not depend on the worker count.

/// Mean activity of iterated bundles of k i.i.d. states per theta, against
/// the closed-form prediction and asymptote. Also reports d(x, x + y).
ResultTable run_sparsity(const ExperimentConfig& config);

/// Exact and quadratic MI between a q-state and copies with a fraction
/// epsilon of bits flipped, epsilon = 0, 0.05, ..., 1.
ResultTable run_mi_curve(const ExperimentConfig& config);

/// Per-position I(L; item), I(R; item) and their weighted combinations for
/// each list length.
ResultTable run_spc(const ExperimentConfig& config);

/// MI profile of a sequence's L and R states over its items, perturbed
/// look-alikes of two items and an unseen item.
ResultTable run_order_profile(const ExperimentConfig& config);

/// Cueing experiments: position markers, chaining and the bound-context
/// sequence eta + a*k + b*l + c*m + d*l + e*n, under both folds.
ResultTable run_context_cue(const ExperimentConfig& config);

struct RenderedState {
  std::string name;
  BitImage image;
};

struct ImageDemoResult {
  ResultTable table;
  std::vector<RenderedState> renders;
};

/// L/R states of an image sequence at the configured theta and at the
/// associative endpoints theta = 0 and theta = 1, with MI profiles for the images and for an i.i.d. random sequence of the
/// same length and activity.
ImageDemoResult run_image_demo(const ExperimentConfig& config, std::span<const BitImage> images);

/// Dispatches on config.experiment; image_demo loads config.images.
ResultTable run_experiment(const ExperimentConfig& config);

/// Builds the metadata block embedded in every result table.
nlohmann::ordered_json result_metadata(const ExperimentConfig& config);

}  // namespace memstate
