#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memstate/algebra.hpp"
#include "memstate/info.hpp"

namespace memstate {

enum class Experiment { sparsity, mi_curve, spc, order_profile, context_cue, image_demo };
enum class OutputFormat { csv, json };
enum class EtaInit { random, zeros };
/// How per-trial measurements become one MI value: the mean of per-trial MI,
/// or the MI of the joint table pooled over all trials (N * trials sites).
enum class Aggregate { mean, pooled };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view text);
std::string_view to_string(OutputFormat f) noexcept;
OutputFormat parse_output_format(std::string_view text);
std::string_view to_string(EtaInit e) noexcept;
EtaInit parse_eta_init(std::string_view text);
std::string_view to_string(Aggregate a) noexcept;
Aggregate parse_aggregate(std::string_view text);

struct ImageSource {
  std::string path;
  unsigned threshold = 128;
  std::size_t count = 6;

  friend bool operator==(const ImageSource&, const ImageSource&) = default;
};

/// Everything needed to reproduce one experiment run.
struct ExperimentConfig {
  static constexpr int kSchema = 1;

  Experiment experiment = Experiment::spc;
  AlgebraParams params;
  bool has_seed = false;
  std::vector<std::uint32_t> list_lengths;
  std::vector<double> thetas;
  double rho_r = 1.0;
  double rho_l = 1.0;
  /// (rho_r, rho_l) pairs for the forward and backward serial-recall curves.
  std::array<double, 2> forward_weights{1.0, 0.3};
  std::array<double, 2> backward_weights{0.3, 1.0};
  unsigned trials = 10;
  MiMode mode = MiMode::exact;
  EtaInit eta = EtaInit::random;
  /// Used by the spc and order_profile experiments.
  Aggregate aggregate = Aggregate::mean;
  double similar_epsilon = 0.1;
  ImageSource images;
  std::string output_path;
  OutputFormat output_format = OutputFormat::csv;
  /// Worker threads for trial-level parallelism; 0 = OpenMP default. Affects
  /// speed only, never results.
  int workers = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Defaults for each experiment: N = 10000, q = 1/3, theta = 1/2, 10 trials,
/// with per-experiment list lengths (and q = 1/2 where dense states are needed).
ExperimentConfig default_config(Experiment experiment);

/// Throws ConfigError describing the first invalid field.
void validate(const ExperimentConfig& config);

/// JSON form with a "schema" field. `include_runtime` adds execution-only
/// settings (workers, output path/format) that do not affect results.
nlohmann::ordered_json to_json(const ExperimentConfig& config, bool include_runtime = true);

/// Overlays `j` on `base`. Unknown keys, a wrong schema or mistyped values
/// throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base);

ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

}  // namespace memstate
