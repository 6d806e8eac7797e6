#include "memstate/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <vector>

#include "CLI11.hpp"
#include "memstate/algebra.hpp"
#include "memstate/config.hpp"
#include "memstate/errors.hpp"
#include "memstate/harness.hpp"
#include "memstate/info.hpp"
#include "memstate/results.hpp"

namespace memstate {

namespace {

struct ExperimentFlags {
  Experiment experiment = Experiment::spc;
  std::string config_path;
  std::uint32_t n = 0;
  double q = 0.0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> list_lengths;
  std::vector<double> thetas;
  double rho_r = 0.0;
  double rho_l = 0.0;
  unsigned trials = 0;
  std::string mode;
  std::string out;
  std::string format;
  std::string eta;
  std::string aggregate;
  int workers = 0;
  double similar_epsilon = 0.0;
  std::string images;
  unsigned threshold = 0;
  std::size_t count = 0;
  bool dump_config = false;
};

struct OpFlags {
  std::string operation;
  std::vector<std::string> inputs;
  std::string out;
  std::string mode = "exact";
  double theta = 0.5;
  double epsilon = 0.0;
  double q = 0.5;
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
};

bool given(const CLI::App* app, const char* name) { return app->get_option(name)->count() > 0; }

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file (flags override it)");
  sub->add_option("--n", f.n, "grid size N (state dimension)");
  sub->add_option("--q", f.q, "mean activity of random states, in (0, 1/2]");
  sub->add_option("--theta", f.theta, "bundling threshold, in [1/2, 1)");
  sub->add_option("--seed", f.seed, "random seed (required)");
  sub->add_option("--list-length", f.list_lengths, "list length(s); repeatable");
  sub->add_option("--thetas", f.thetas, "threshold sweep for the sparsity experiment");
  sub->add_option("--rho-r", f.rho_r, "weight of I(R; x)");
  sub->add_option("--rho-l", f.rho_l, "weight of I(L; x)");
  sub->add_option("--trials", f.trials, "independent trials to average");
  sub->add_option("--mode", f.mode, "mutual information: exact | approx");
  sub->add_option("--out", f.out, "output file (stdout when absent)");
  sub->add_option("--format", f.format, "csv | json (default from --out extension)");
  sub->add_option("--eta", f.eta, "initial medium state: random | zeros");
  sub->add_option("--aggregate", f.aggregate, "MI over trials: mean | pooled");
  sub->add_option("--workers", f.workers, "worker threads (0 = all cores)");
  sub->add_option("--similar-epsilon", f.similar_epsilon, "flip rate for look-alike items");
  sub->add_flag("--dump-config", f.dump_config, "print the effective config as JSON and exit");
  if (f.experiment == Experiment::image_demo) {
    sub->add_option("--images", f.images, "IDX3 image file");
    sub->add_option("--threshold", f.threshold, "binarisation threshold 0..255");
    sub->add_option("--count", f.count, "number of leading images to use");
  }
}

ExperimentConfig effective_config(const CLI::App* sub, const ExperimentFlags& f) {
  ExperimentConfig c = default_config(f.experiment);
  if (!f.config_path.empty()) {
    c = load_config(f.config_path, c);
    if (c.experiment != f.experiment)
      throw ConfigError("config file is for experiment '" + std::string(to_string(c.experiment)) +
                        "', not '" + std::string(to_string(f.experiment)) + "'");
  }
  if (given(sub, "--n")) c.params.dimension = f.n;
  if (given(sub, "--q")) c.params.q = f.q;
  if (given(sub, "--theta")) {
    c.params.theta = f.theta;
    if (f.experiment == Experiment::sparsity) c.thetas = {f.theta};
  }
  if (given(sub, "--seed")) {
    c.params.seed = f.seed;
    c.has_seed = true;
  }
  if (given(sub, "--list-length")) c.list_lengths = f.list_lengths;
  if (given(sub, "--thetas")) c.thetas = f.thetas;
  if (given(sub, "--rho-r")) c.rho_r = f.rho_r;
  if (given(sub, "--rho-l")) c.rho_l = f.rho_l;
  if (given(sub, "--trials")) c.trials = f.trials;
  if (given(sub, "--mode")) c.mode = parse_mi_mode(f.mode);
  if (given(sub, "--eta")) c.eta = parse_eta_init(f.eta);
  if (given(sub, "--aggregate")) c.aggregate = parse_aggregate(f.aggregate);
  if (given(sub, "--workers")) c.workers = f.workers;
  if (given(sub, "--similar-epsilon")) c.similar_epsilon = f.similar_epsilon;
  if (given(sub, "--out")) {
    c.output_path = f.out;
    if (!given(sub, "--format") && std::filesystem::path(f.out).extension() == ".json")
      c.output_format = OutputFormat::json;
  }
  if (given(sub, "--format")) c.output_format = parse_output_format(f.format);
  if (f.experiment == Experiment::image_demo) {
    if (given(sub, "--images")) c.images.path = f.images;
    if (given(sub, "--threshold")) c.images.threshold = f.threshold;
    if (given(sub, "--count")) c.images.count = f.count;
  }
  return c;
}

int run_experiment_command(const CLI::App* sub, const ExperimentFlags& f, std::ostream& out) {
  const ExperimentConfig config = effective_config(sub, f);
  if (f.dump_config) {
    out << to_json(config).dump(2) << '\n';
    return 0;
  }
  if (!config.has_seed) throw ConfigError("a seed is required: pass --seed or set \"seed\"");
  validate(config);

  ResultTable table;
  if (config.experiment == Experiment::image_demo) {
    if (config.images.path.empty()) throw ConfigError("image-demo needs --images <idx file>");
    const auto images =
        ingest_idx_images(config.images.path, config.images.threshold, config.images.count);
    auto demo = run_image_demo(config, images);
    if (!config.output_path.empty()) {
      const std::filesystem::path base(config.output_path);
      for (const auto& render : demo.renders) {
        auto path = base;
        path.replace_extension("." + render.name + ".pbm");
        write_pbm(path, render.image);
      }
    }
    table = std::move(demo.table);
  } else {
    table = run_experiment(config);
  }

  if (config.output_path.empty()) {
    if (config.output_format == OutputFormat::csv)
      write_csv(out, table);
    else
      write_json(out, table);
  } else {
    write_results(table, config.output_path, config.output_format);
  }
  return 0;
}

int run_op(const CLI::App* sub, const OpFlags& f, std::ostream& out) {
  auto need_inputs = [&](std::size_t count) {
    if (f.inputs.size() != count)
      throw ConfigError("op " + f.operation + " takes " + std::to_string(count) +
                        " state file(s), got " + std::to_string(f.inputs.size()));
  };
  auto need_out = [&] {
    if (f.out.empty()) throw ConfigError("op " + f.operation + " needs -o <output state file>");
  };
  auto need_seed = [&] {
    if (!given(sub, "--seed")) throw ConfigError("op " + f.operation + " needs --seed");
  };
  auto load = [&](std::size_t i) { return load_state(f.inputs.at(i)); };

  const std::string& op = f.operation;
  if (op == "random") {
    need_inputs(0);
    need_out();
    need_seed();
    if (f.n == 0) throw ConfigError("op random needs --n > 0");
    RngStream rng(f.seed);
    save_state(f.out, random_qstate(f.n, f.q, rng));
  } else if (op == "bind") {
    need_inputs(2);
    need_out();
    save_state(f.out, bind(load(0), load(1)));
  } else if (op == "bundle") {
    need_inputs(2);
    need_out();
    need_seed();
    RngStream rng(f.seed);
    save_state(f.out, bundle(load(0), load(1), f.theta, rng));
  } else if (op == "perturb") {
    need_inputs(1);
    need_out();
    need_seed();
    RngStream rng(f.seed);
    save_state(f.out, perturb(load(0), f.epsilon, rng));
  } else if (op == "distance") {
    need_inputs(2);
    out << format_number(distance(load(0), load(1))) << '\n';
  } else if (op == "activity") {
    need_inputs(1);
    out << format_number(mean_activity(load(0))) << '\n';
  } else if (op == "mi") {
    need_inputs(2);
    out << format_number(mutual_information(load(0), load(1), parse_mi_mode(f.mode), f.q)) << '\n';
  } else if (op == "joint") {
    need_inputs(2);
    const auto t = joint_distribution(load(0), load(1));
    out << "p00 " << format_number(t.p00) << "\np01 " << format_number(t.p01) << "\np10 "
        << format_number(t.p10) << "\np11 " << format_number(t.p11) << '\n';
  } else {
    throw ConfigError("unknown op '" + op + "'");
  }
  return 0;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-associative binary hypervector memory experiments", "memstate"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, Experiment>> experiments = {
      {"spc", Experiment::spc},
      {"sparsity", Experiment::sparsity},
      {"mi-curve", Experiment::mi_curve},
      {"order", Experiment::order_profile},
      {"cue", Experiment::context_cue},
      {"image-demo", Experiment::image_demo}};
  const std::map<std::string, std::string> descriptions = {
      {"spc", "serial position curves from the L/R memory state"},
      {"sparsity", "activity of iterated bundles versus the closed form"},
      {"mi-curve", "exact versus quadratic mutual information over flip rate"},
      {"order", "MI order profile of a sequence's L and R states"},
      {"cue", "context retrieval by cueing (markers, chaining, bound contexts)"},
      {"image-demo", "L/R states of an IDX image sequence"}};

  std::vector<std::unique_ptr<ExperimentFlags>> flags;
  std::vector<CLI::App*> subs;
  for (const auto& [name, experiment] : experiments) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    flags.push_back(std::make_unique<ExperimentFlags>());
    flags.back()->experiment = experiment;
    add_experiment_flags(sub, *flags.back());
    subs.push_back(sub);
  }

  OpFlags op_flags;
  auto* op = app.add_subcommand("op", "algebra operations on state files");
  op->add_option("operation", op_flags.operation,
                 "random | bind | bundle | perturb | distance | activity | mi | joint")
      ->required();
  op->add_option("inputs", op_flags.inputs, "input state files");
  op->add_option("-o,--out", op_flags.out, "output state file");
  op->add_option("--mode", op_flags.mode, "exact | approx");
  op->add_option("--theta", op_flags.theta, "bundling threshold");
  op->add_option("--epsilon", op_flags.epsilon, "flip probability for perturb");
  op->add_option("--q", op_flags.q, "activity for random / approximate MI");
  op->add_option("--n", op_flags.n, "dimension for random");
  op->add_option("--seed", op_flags.seed, "random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.back()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (op->parsed()) return run_op(op, op_flags, out);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return run_experiment_command(subs[i], *flags[i], out);
    err << app.help();
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace memstate
