#include "memstate/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <ctime>
#include <exception>
#include <limits>
#include <numeric>
#include <ranges>
#include <stdexcept>
#include <type_traits>

#ifdef MEMSTATE_HAVE_OPENMP
#include <omp.h>
#endif

#include "memstate/errors.hpp"
#include "memstate/sequence.hpp"
#include "memstate/stats.hpp"

#ifndef MEMSTATE_BUILD_VERSION
#define MEMSTATE_BUILD_VERSION "unknown"
#endif

namespace memstate {

namespace {

// Runs job(cell, trial) for every cell x trial pair, possibly concurrently,
// and returns the results indexed [cell][trial].
template <typename Job>
auto run_jobs(std::size_t cells, unsigned trials, int workers, Job&& job) {
  using Result = std::invoke_result_t<Job&, std::size_t, unsigned>;
  const std::size_t total = cells * trials;
  std::vector<Result> flat(total);
  std::vector<std::exception_ptr> errors(total);
  const auto n = static_cast<std::ptrdiff_t>(total);
#ifdef MEMSTATE_HAVE_OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
  (void)workers;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      flat[idx] = job(idx / trials, static_cast<unsigned>(idx % trials));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<std::vector<Result>> by_cell(cells);
  for (std::size_t c = 0; c < cells; ++c)
    by_cell[c].assign(std::make_move_iterator(flat.begin() + c * trials),
                      std::make_move_iterator(flat.begin() + (c + 1) * trials));
  return by_cell;
}

// Element-wise mean, accumulated in trial order.
std::vector<double> mean_over_trials(const std::vector<std::vector<double>>& trials) {
  std::vector<double> mean(trials.front().size(), 0.0);
  for (const auto& t : trials)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += t[i];
  for (auto& m : mean) m /= static_cast<double>(trials.size());
  return mean;
}

// Appends the joint table of (container, item) to a per-trial record.
void push_table(std::vector<double>& record, const State& container, const State& item) {
  const JointTable t = joint_distribution(container, item);
  record.insert(record.end(), {t.p00, t.p01, t.p10, t.p11});
}

// One MI value per recorded pair. Sites are i.i.d. across trials, so the
// pooled table is the joint distribution estimated from N * trials samples.
std::vector<double> aggregate_mi(const std::vector<std::vector<double>>& trials,
                                 const ExperimentConfig& c) {
  const std::size_t pairs = trials.front().size() / 4;
  std::vector<double> out(pairs, 0.0);
  auto mi_at = [&](const std::vector<double>& v, std::size_t k) {
    return mutual_information(JointTable{v[4 * k], v[4 * k + 1], v[4 * k + 2], v[4 * k + 3]},
                              c.mode, c.params.q);
  };
  if (c.aggregate == Aggregate::pooled) {
    const auto pooled = mean_over_trials(trials);
    for (std::size_t k = 0; k < pairs; ++k) out[k] = mi_at(pooled, k);
    return out;
  }
  for (const auto& t : trials)
    for (std::size_t k = 0; k < pairs; ++k) out[k] += mi_at(t, k);
  for (auto& o : out) o /= static_cast<double>(trials.size());
  return out;
}

RngStream job_stream(const ExperimentConfig& c, std::size_t cell, unsigned trial) {
  return RngStream(c.params.seed, static_cast<std::uint64_t>(c.experiment) + 1)
      .child(cell)
      .child(trial);
}

State make_eta(const ExperimentConfig& c, std::uint32_t dimension, double q, RngStream& rng) {
  return c.eta == EtaInit::zeros ? State::zeros(dimension) : random_qstate(dimension, q, rng);
}

std::vector<State> random_items(std::size_t count, std::uint32_t dimension, double q,
                                RngStream& rng) {
  std::vector<State> items;
  items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) items.push_back(random_qstate(dimension, q, rng));
  return items;
}

std::string upper_label(std::size_t i) {
  return i < 26 ? std::string(1, static_cast<char>('A' + i)) : "I" + std::to_string(i + 1);
}

std::string lower_label(std::size_t i) {
  return i < 26 ? std::string(1, static_cast<char>('a' + i)) : "i" + std::to_string(i + 1);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void finish(ResultTable& table) { table.metadata["timestamp"] = utc_timestamp(); }

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Minimum over positions 3..n-2 (1-based), or over 2..n-1 for short lists.
double interior_min(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t lo = n >= 5 ? 2 : 1;
  const std::size_t hi = n >= 5 ? n - 2 : n - 1;
  if (lo >= hi) return std::numeric_limits<double>::quiet_NaN();
  return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo),
                           v.begin() + static_cast<std::ptrdiff_t>(hi));
}

}  // namespace

nlohmann::ordered_json result_metadata(const ExperimentConfig& config) {
  nlohmann::ordered_json m;
  m["generator"] = "memstate";
  m["version"] = MEMSTATE_BUILD_VERSION;
  m["experiment"] = to_string(config.experiment);
  m["seed"] = config.params.seed;
  m["config"] = to_json(config, false);
  return m;
}

ResultTable run_sparsity(const ExperimentConfig& config) {
  validate(config);
  const auto& p = config.params;
  const std::uint32_t kmax = *std::max_element(config.list_lengths.begin(), config.list_lengths.end());

  auto results = run_jobs(config.thetas.size(), config.trials, config.workers,
                          [&](std::size_t cell, unsigned trial) {
    const double theta = config.thetas[cell];
    auto rng = job_stream(config, cell, trial);
    std::vector<double> v(2 * std::size_t{kmax} + 1);
    State dense = random_qstate(p.dimension, 0.5, rng);
    State sparse = random_qstate(p.dimension, p.q, rng);
    v[0] = mean_activity(dense);
    v[kmax] = mean_activity(sparse);
    for (std::uint32_t k = 1; k < kmax; ++k) {
      dense = bundle(dense, random_qstate(p.dimension, 0.5, rng), theta, rng);
      sparse = bundle(sparse, random_qstate(p.dimension, p.q, rng), theta, rng);
      v[k] = mean_activity(dense);
      v[kmax + k] = mean_activity(sparse);
    }
    const State x = random_qstate(p.dimension, p.q, rng);
    const State y = random_qstate(p.dimension, p.q, rng);
    v[2 * std::size_t{kmax}] = distance(x, bundle(x, y, theta, rng));
    return v;
  });

  ResultTable table;
  table.columns = {"theta", "k", "measured", "predicted", "asymptote", "measured_sparse",
                   "asymptote_sparse", "bundle_distance", "bundle_distance_rule",
                   "bundle_distance_closed_form"};
  table.plot_x = "k";
  table.plot_keys = {"theta"};
  table.metadata = result_metadata(config);
  const double q = p.q;
  for (std::size_t cell = 0; cell < config.thetas.size(); ++cell) {
    const double theta = config.thetas[cell];
    const auto mean = mean_over_trials(results[cell]);
    for (std::uint32_t k = 1; k <= kmax; ++k) {
      table.add_row({theta, static_cast<double>(k), mean[k - 1], expected_bundle_activity(k, theta),
                     asymptotic_activity(0.5, theta), mean[kmax + k - 1],
                     asymptotic_activity(q, theta), mean[2 * std::size_t{kmax}], q * (1 - q),
                     2 * q * (1 - q) * (1 - theta)});
    }
  }
  finish(table);
  return table;
}

ResultTable run_mi_curve(const ExperimentConfig& config) {
  validate(config);
  const auto& p = config.params;
  constexpr std::size_t kSteps = 20;

  auto results = run_jobs(kSteps + 1, config.trials, config.workers,
                          [&](std::size_t cell, unsigned trial) {
    const double epsilon = static_cast<double>(cell) / kSteps;
    auto rng = job_stream(config, cell, trial);
    const State x = random_qstate(p.dimension, p.q, rng);
    const State y = perturb(x, epsilon, rng);
    const double q_hat = std::clamp(mean_activity(x), 1e-9, 1.0 - 1e-9);
    return std::vector<double>{mutual_information_exact(x, y),
                               mutual_information_approx(x, y, p.q),
                               mutual_information_approx(x, y, q_hat)};
  });

  ResultTable table;
  table.columns = {"epsilon", "exact_mi", "approx_mi", "approx_mi_reestimated", "theory_mi", "gap"};
  table.plot_x = "epsilon";
  table.metadata = result_metadata(config);
  for (std::size_t cell = 0; cell <= kSteps; ++cell) {
    const double epsilon = static_cast<double>(cell) / kSteps;
    const auto mean = mean_over_trials(results[cell]);
    const double q = p.q;
    const JointTable theory{(1 - q) * (1 - epsilon), (1 - q) * epsilon, q * epsilon,
                            q * (1 - epsilon)};
    table.add_row({epsilon, mean[0], mean[1], mean[2], mutual_information(theory),
                   mean[0] - mean[1]});
  }
  finish(table);
  return table;
}

ResultTable run_spc(const ExperimentConfig& config) {
  validate(config);
  const auto& p = config.params;

  auto results = run_jobs(config.list_lengths.size(), config.trials, config.workers,
                          [&](std::size_t cell, unsigned trial) {
    const std::size_t n = config.list_lengths[cell];
    auto rng = job_stream(config, cell, trial);
    const auto items = random_items(n, p.dimension, p.q, rng);
    const State eta = make_eta(config, p.dimension, p.q, rng);
    const MemoryState m = memory_state(items, eta, p, rng.child(1));
    std::vector<double> v;
    v.reserve(8 * n);
    for (const auto& item : items) {
      push_table(v, m.l, item);
      push_table(v, m.r, item);
    }
    return v;
  });

  ResultTable table;
  table.columns = {"list_length", "position", "mi_l", "mi_r", "mi_m", "mi_forward", "mi_backward"};
  table.plot_x = "position";
  table.plot_keys = {"list_length"};
  table.metadata = result_metadata(config);
  auto summary = nlohmann::ordered_json::object();
  for (std::size_t cell = 0; cell < config.list_lengths.size(); ++cell) {
    const std::size_t n = config.list_lengths[cell];
    const auto mi = aggregate_mi(results[cell], config);
    std::vector<double> l(n), r(n), m(n);
    auto combine = [&](std::size_t i, const std::array<double, 2>& w) {
      return w[0] * r[i] + w[1] * l[i];
    };
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = mi[2 * i];
      r[i] = mi[2 * i + 1];
      m[i] = combine(i, {config.rho_r, config.rho_l});
      table.add_row({static_cast<double>(n), static_cast<double>(i + 1), l[i], r[i], m[i],
                     combine(i, config.forward_weights), combine(i, config.backward_weights)});
    }
    auto& s = summary[std::to_string(n)];
    if (n >= 2) {
      s["spearman_l"] = spearman_with_position(l);
      s["spearman_r"] = spearman_with_position(r);
      s["spearman_m"] = spearman_with_position(m);
    }
    if (n >= 3) {
      const double floor = interior_min(m);
      s["endpoint_ratio_first"] = m.front() / floor;
      s["endpoint_ratio_last"] = m.back() / floor;
    }
  }
  table.metadata["summary"] = std::move(summary);
  finish(table);
  return table;
}

ResultTable run_order_profile(const ExperimentConfig& config) {
  validate(config);
  const auto& p = config.params;
  const std::size_t n = config.list_lengths.front();

  auto results = run_jobs(1, config.trials, config.workers, [&](std::size_t cell, unsigned trial) {
    auto rng = job_stream(config, cell, trial);
    auto candidates = random_items(n, p.dimension, p.q, rng);
    const State eta = make_eta(config, p.dimension, p.q, rng);
    const MemoryState m = memory_state(std::span<const State>(candidates), eta, p, rng.child(1));
    candidates.push_back(perturb(candidates[3], config.similar_epsilon, rng));
    candidates.push_back(perturb(candidates[2], config.similar_epsilon, rng));
    candidates.push_back(random_qstate(p.dimension, p.q, rng));
    std::vector<double> v;
    v.reserve(8 * candidates.size());
    for (const auto& c : candidates) {
      push_table(v, m.l, c);
      push_table(v, m.r, c);
    }
    return v;
  });

  ResultTable table;
  table.columns = {"label", "position", "mi_l", "mi_r"};
  table.plot_x = "label";
  table.metadata = result_metadata(config);
  const auto mean = aggregate_mi(results[0], config);
  std::vector<double> l(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    l[i] = mean[2 * i];
    r[i] = mean[2 * i + 1];
    table.add_row({upper_label(i), static_cast<double>(i + 1), l[i], r[i]});
  }
  const std::vector<std::pair<std::string, double>> extras = {
      {"F~" + upper_label(3), 4.0}, {"F~" + upper_label(2), 3.0}, {"new", 0.0}};
  for (std::size_t e = 0; e < extras.size(); ++e)
    table.add_row({extras[e].first, extras[e].second, mean[2 * (n + e)], mean[2 * (n + e) + 1]});
  table.metadata["summary"] = {{"spearman_l", spearman_with_position(l)},
                               {"spearman_r", spearman_with_position(r)}};
  finish(table);
  return table;
}

ResultTable run_context_cue(const ExperimentConfig& config) {
  validate(config);
  const auto& p = config.params;
  const std::size_t n = config.list_lengths.front();
  constexpr std::size_t kBound = 5;
  const std::array<Fold, 2> folds{Fold::left, Fold::right};

  auto results = run_jobs(folds.size(), config.trials, config.workers,
                          [&](std::size_t cell, unsigned trial) {
    const Fold fold = folds[cell];
    auto rng = job_stream(config, 0, trial);  // same sequences for both folds
    auto noise = job_stream(config, cell + 1, trial);
    const auto items = random_items(n, p.dimension, p.q, rng);
    const State eta = make_eta(config, p.dimension, p.q, rng);
    auto markers = make_markers(n, p.dimension, p.q, rng);
    const State absent = random_qstate(p.dimension, p.q, rng);
    const auto bound_items = random_items(kBound, p.dimension, p.q, rng);
    // Contexts k, l, m, n; l is shared by the second and fourth items.
    const auto contexts = random_items(4, p.dimension, p.q, rng);

    std::vector<double> v;
    v.reserve(3 * n + kBound);
    const auto y = encode_position_markers(items, markers, eta, p.theta, noise, fold);
    const State cued_y = cue(y.state, items[1]);
    for (const auto& marker : *y.marker_states | std::views::take(n))
      v.push_back(mutual_information(cued_y, marker, config.mode, p.q));
    const State absent_y = cue(y.state, absent);
    for (const auto& marker : *y.marker_states | std::views::take(n))
      v.push_back(mutual_information(absent_y, marker, config.mode, p.q));

    const auto z = encode_chaining(items, eta, p.theta, noise, fold);
    const State cued_z = cue(z.state, items[1]);
    for (const auto& item : items) v.push_back(mutual_information(cued_z, item, config.mode, p.q));

    const std::array<std::size_t, kBound> context_of{0, 1, 2, 1, 3};
    std::vector<State> terms;
    for (std::size_t i = 0; i < kBound; ++i) terms.push_back(bind(bound_items[i], contexts[context_of[i]]));
    const State x = fold_state(terms, eta, p.theta, noise, fold);
    const State cued_x = cue(x, contexts[1]);
    for (const auto& item : bound_items) v.push_back(mutual_information(cued_x, item, config.mode, p.q));
    return v;
  });

  ResultTable table;
  table.columns = {"construction", "fold", "cue", "candidate", "position", "mi"};
  table.plot_x = "position";
  table.plot_keys = {"construction", "fold"};
  table.metadata = result_metadata(config);
  auto summary = nlohmann::ordered_json::object();

  auto emit = [&](const std::string& construction, const std::string& fold_name,
                  const std::string& cue_label, const std::vector<std::string>& labels,
                  std::span<const double> values) {
    MIProfile profile;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      table.add_row({construction, fold_name, cue_label, labels[i], static_cast<double>(i + 1),
                     values[i]});
      profile.entries.push_back({labels[i], values[i]});
    }
    std::stable_sort(profile.entries.begin(), profile.entries.end(),
                     [](const auto& a, const auto& b) {
                       if (a.mi != b.mi) return a.mi > b.mi;
                       return a.label < b.label;
                     });
    auto& s = summary[construction][fold_name];
    s["top1"] = profile.entries[0].label;
    s["top2"] = profile.entries.size() > 1 ? profile.entries[1].label : "";
    s["max"] = profile.entries[0].mi;
  };

  for (std::size_t cell = 0; cell < folds.size(); ++cell) {
    const std::string fold_name = cell == 0 ? "L" : "R";
    const auto mean = mean_over_trials(results[cell]);
    std::vector<std::string> marker_labels, item_labels, bound_labels;
    for (std::size_t i = 0; i < n; ++i) {
      marker_labels.push_back("m" + std::to_string(i + 1));
      item_labels.push_back(lower_label(i));
    }
    for (std::size_t i = 0; i < kBound; ++i) bound_labels.push_back(lower_label(i));
    const std::span<const double> all(mean);
    emit("position_marker", fold_name, "b", marker_labels, all.subspan(0, n));
    emit("position_marker_absent", fold_name, "new", marker_labels, all.subspan(n, n));
    emit("chaining", fold_name, "b", item_labels, all.subspan(2 * n, n));
    emit("bound_context", fold_name, "l", bound_labels, all.subspan(3 * n, kBound));
  }
  table.metadata["summary"] = std::move(summary);
  finish(table);
  return table;
}

ImageDemoResult run_image_demo(const ExperimentConfig& config, std::span<const BitImage> images) {
  validate(config);
  if (images.size() < 2) throw std::invalid_argument("image demo needs at least two images");
  const std::uint32_t width = images.front().width;
  const std::uint32_t height = images.front().height;
  std::vector<State> states;
  double activity = 0.0;
  for (const auto& image : images) {
    if (image.width != width || image.height != height)
      throw std::invalid_argument("image size mismatch: " + std::to_string(width) + "x" +
                                  std::to_string(height) + " vs " + std::to_string(image.width) +
                                  "x" + std::to_string(image.height));
    states.push_back(image.to_state());
    activity += mean_activity(states.back());
  }
  const std::uint32_t dimension = states.front().dimension();
  const double q = std::clamp(activity / static_cast<double>(states.size()), 1e-6, 1.0 - 1e-6);
  const std::array<double, 3> thetas{config.params.theta, 0.0, 1.0};
  const std::size_t n = states.size();

  struct Trial {
    std::vector<double> values;
    std::vector<State> lr;  // L then R of the image sequence
  };
  auto results = run_jobs(thetas.size(), config.trials, config.workers,
                          [&](std::size_t cell, unsigned trial) {
    auto rng = job_stream(config, cell, trial);
    AlgebraParams params{dimension, q, thetas[cell], config.params.seed};
    const State eta = make_eta(config, dimension, q, rng);
    const MemoryState image_memory = memory_state(states, eta, params, rng.child(1));
    const auto random_seq = random_items(n, dimension, q, rng);
    const State random_eta = make_eta(config, dimension, q, rng);
    const MemoryState random_memory = memory_state(random_seq, random_eta, params, rng.child(2));
    Trial t;
    for (std::size_t i = 0; i < n; ++i) {
      t.values.push_back(mutual_information(image_memory.l, states[i], config.mode, q));
      t.values.push_back(mutual_information(image_memory.r, states[i], config.mode, q));
      t.values.push_back(mutual_information(random_memory.l, random_seq[i], config.mode, q));
      t.values.push_back(mutual_information(random_memory.r, random_seq[i], config.mode, q));
    }
    t.lr = {image_memory.l, image_memory.r};
    return t;
  });

  ImageDemoResult out;
  ResultTable& table = out.table;
  table.columns = {"theta", "fold", "position", "label", "mi_image", "mi_random"};
  table.plot_x = "position";
  table.plot_keys = {"theta", "fold"};
  table.metadata = result_metadata(config);
  table.metadata["image_activity"] = q;
  table.metadata["image_size"] = {width, height};
  auto summary = nlohmann::ordered_json::object();
  for (std::size_t cell = 0; cell < thetas.size(); ++cell) {
    std::vector<std::vector<double>> values;
    bool identical = true;
    for (const auto& t : results[cell]) {
      values.push_back(t.values);
      identical = identical && t.lr[0] == t.lr[1];
    }
    const auto mean = mean_over_trials(values);
    std::vector<double> l_img(n), r_img(n);
    for (std::size_t i = 0; i < n; ++i) {
      l_img[i] = mean[4 * i];
      r_img[i] = mean[4 * i + 1];
    }
    for (std::size_t f = 0; f < 2; ++f)
      for (std::size_t i = 0; i < n; ++i)
        table.add_row({thetas[cell], f == 0 ? "L" : "R", static_cast<double>(i + 1),
                       "img" + std::to_string(i + 1), mean[4 * i + f], mean[4 * i + 2 + f]});
    const std::string key = "theta=" + format_number(thetas[cell]);
    summary[key] = {{"argmax_l_image", argmax(l_img) + 1},
                    {"argmax_r_image", argmax(r_img) + 1},
                    {"l_equals_r", identical}};
    const auto& first = results[cell].front();
    const std::string suffix = "theta" + format_number(thetas[cell]);
    out.renders.push_back({"L_" + suffix, BitImage::from_state(first.lr[0], width, height)});
    out.renders.push_back({"R_" + suffix, BitImage::from_state(first.lr[1], width, height)});
  }
  table.metadata["summary"] = std::move(summary);
  finish(table);
  return out;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::sparsity: return run_sparsity(config);
    case Experiment::mi_curve: return run_mi_curve(config);
    case Experiment::spc: return run_spc(config);
    case Experiment::order_profile: return run_order_profile(config);
    case Experiment::context_cue: return run_context_cue(config);
    case Experiment::image_demo: {
      validate(config);
      const auto images =
          ingest_idx_images(config.images.path, config.images.threshold, config.images.count);
      return run_image_demo(config, images).table;
    }
  }
  throw ConfigError("unknown experiment");
}

}  // namespace memstate
