#include "memstate/config.hpp"

#include <fstream>
#include <set>

#include "memstate/errors.hpp"

namespace memstate {

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::sparsity: return "sparsity";
    case Experiment::mi_curve: return "mi_curve";
    case Experiment::spc: return "spc";
    case Experiment::order_profile: return "order_profile";
    case Experiment::context_cue: return "context_cue";
    case Experiment::image_demo: return "image_demo";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::sparsity, Experiment::mi_curve, Experiment::spc,
                 Experiment::order_profile, Experiment::context_cue, Experiment::image_demo})
    if (text == to_string(e)) return e;
  throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("format must be 'csv' or 'json', got '" + std::string(text) + "'");
}

std::string_view to_string(EtaInit e) noexcept { return e == EtaInit::random ? "random" : "zeros"; }

EtaInit parse_eta_init(std::string_view text) {
  if (text == "random") return EtaInit::random;
  if (text == "zeros") return EtaInit::zeros;
  throw ConfigError("eta must be 'random' or 'zeros', got '" + std::string(text) + "'");
}

std::string_view to_string(Aggregate a) noexcept { return a == Aggregate::mean ? "mean" : "pooled"; }

Aggregate parse_aggregate(std::string_view text) {
  if (text == "mean") return Aggregate::mean;
  if (text == "pooled") return Aggregate::pooled;
  throw ConfigError("aggregate must be 'mean' or 'pooled', got '" + std::string(text) + "'");
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  switch (experiment) {
    case Experiment::sparsity:
      c.list_lengths = {50};
      c.thetas = {0.5, 0.6, 0.75, 0.9};
      break;
    case Experiment::mi_curve:
      c.params.q = 0.5;
      break;
    case Experiment::spc:
      c.list_lengths = {10, 15};
      break;
    case Experiment::order_profile:
      c.list_lengths = {10};
      break;
    case Experiment::context_cue:
      // Binding with a dense item decorrelates; sparse items leak into cues.
      c.params.q = 0.5;
      c.list_lengths = {5};
      break;
    case Experiment::image_demo:
      c.images.count = 6;
      break;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  c.params.validate_experiment_range();
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  unit(c.rho_r, "rho_r");
  unit(c.rho_l, "rho_l");
  for (double w : c.forward_weights) unit(w, "forward_weights");
  for (double w : c.backward_weights) unit(w, "backward_weights");
  unit(c.similar_epsilon, "similar_epsilon");
  if (c.workers < 0) throw ConfigError("workers must be non-negative");
  for (auto n : c.list_lengths)
    if (n == 0) throw ConfigError("list lengths must be positive");

  switch (c.experiment) {
    case Experiment::sparsity:
      if (c.list_lengths.empty()) throw ConfigError("sparsity needs a maximum list length");
      if (c.thetas.empty()) throw ConfigError("sparsity needs at least one theta");
      for (double t : c.thetas)
        if (!(t >= 0.5 && t < 1.0)) throw ConfigError("thetas must lie in [1/2, 1)");
      break;
    case Experiment::spc:
      if (c.list_lengths.empty()) throw ConfigError("spc needs at least one list length");
      break;
    case Experiment::order_profile:
      if (c.list_lengths.empty() || c.list_lengths.front() < 4)
        throw ConfigError("order_profile needs a list length of at least 4");
      break;
    case Experiment::context_cue:
      if (c.list_lengths.empty() || c.list_lengths.front() < 3)
        throw ConfigError("context_cue needs a list length of at least 3");
      break;
    case Experiment::image_demo:
      if (c.images.count < 2) throw ConfigError("image_demo needs at least 2 images");
      if (c.images.threshold > 255) throw ConfigError("image threshold must be in 0..255");
      break;
    case Experiment::mi_curve:
      break;
  }
}

nlohmann::ordered_json to_json(const ExperimentConfig& c, bool include_runtime) {
  nlohmann::ordered_json j;
  j["schema"] = ExperimentConfig::kSchema;
  j["experiment"] = to_string(c.experiment);
  j["dimension"] = c.params.dimension;
  j["q"] = c.params.q;
  j["theta"] = c.params.theta;
  if (c.has_seed)
    j["seed"] = c.params.seed;
  else
    j["seed"] = nullptr;
  j["list_lengths"] = c.list_lengths;
  j["thetas"] = c.thetas;
  j["rho_r"] = c.rho_r;
  j["rho_l"] = c.rho_l;
  j["forward_weights"] = c.forward_weights;
  j["backward_weights"] = c.backward_weights;
  j["trials"] = c.trials;
  j["mode"] = to_string(c.mode);
  j["eta"] = to_string(c.eta);
  j["aggregate"] = to_string(c.aggregate);
  j["similar_epsilon"] = c.similar_epsilon;
  j["images"] = {{"path", c.images.path},
                 {"threshold", c.images.threshold},
                 {"count", c.images.count}};
  if (include_runtime) {
    j["output_path"] = c.output_path;
    j["output_format"] = to_string(c.output_format);
    j["workers"] = c.workers;
  }
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "schema", "experiment", "dimension", "q", "theta", "seed", "list_lengths", "thetas",
      "rho_r", "rho_l", "forward_weights", "backward_weights", "trials", "mode", "eta", "aggregate",
      "similar_epsilon", "images", "output_path", "output_format", "workers"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  if (!j.contains("schema") || get_as<int>(j, "schema") != ExperimentConfig::kSchema)
    throw ConfigError("config needs \"schema\": " + std::to_string(ExperimentConfig::kSchema));
  if (j.contains("experiment"))
    c.experiment = parse_experiment(get_as<std::string>(j, "experiment"));
  if (j.contains("dimension")) c.params.dimension = get_as<std::uint32_t>(j, "dimension");
  if (j.contains("q")) c.params.q = get_as<double>(j, "q");
  if (j.contains("theta")) c.params.theta = get_as<double>(j, "theta");
  if (j.contains("seed")) {
    if (j.at("seed").is_null()) {
      c.has_seed = false;
    } else {
      c.params.seed = get_as<std::uint64_t>(j, "seed");
      c.has_seed = true;
    }
  }
  if (j.contains("list_lengths"))
    c.list_lengths = get_as<std::vector<std::uint32_t>>(j, "list_lengths");
  if (j.contains("thetas")) c.thetas = get_as<std::vector<double>>(j, "thetas");
  if (j.contains("rho_r")) c.rho_r = get_as<double>(j, "rho_r");
  if (j.contains("rho_l")) c.rho_l = get_as<double>(j, "rho_l");
  if (j.contains("forward_weights"))
    c.forward_weights = get_as<std::array<double, 2>>(j, "forward_weights");
  if (j.contains("backward_weights"))
    c.backward_weights = get_as<std::array<double, 2>>(j, "backward_weights");
  if (j.contains("trials")) c.trials = get_as<unsigned>(j, "trials");
  if (j.contains("mode")) c.mode = parse_mi_mode(get_as<std::string>(j, "mode"));
  if (j.contains("eta")) c.eta = parse_eta_init(get_as<std::string>(j, "eta"));
  if (j.contains("aggregate")) c.aggregate = parse_aggregate(get_as<std::string>(j, "aggregate"));
  if (j.contains("similar_epsilon")) c.similar_epsilon = get_as<double>(j, "similar_epsilon");
  if (j.contains("images")) {
    const auto& im = j.at("images");
    if (!im.is_object()) throw ConfigError("config key 'images' must be an object");
    for (const auto& [key, value] : im.items())
      if (key != "path" && key != "threshold" && key != "count")
        throw ConfigError("unknown config key 'images." + key + "'");
    if (im.contains("path")) c.images.path = get_as<std::string>(im, "path");
    if (im.contains("threshold")) c.images.threshold = get_as<unsigned>(im, "threshold");
    if (im.contains("count")) c.images.count = get_as<std::size_t>(im, "count");
  }
  if (j.contains("output_path")) c.output_path = get_as<std::string>(j, "output_path");
  if (j.contains("output_format"))
    c.output_format = parse_output_format(get_as<std::string>(j, "output_format"));
  if (j.contains("workers")) c.workers = get_as<int>(j, "workers");
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::move(base));
}

}  // namespace memstate
