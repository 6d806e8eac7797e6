#include "memstate/sequence.hpp"

#include <stdexcept>

#include "memstate/errors.hpp"

namespace memstate {

namespace {

void require_items(std::span<const State> items, const State& eta) {
  if (items.empty()) throw std::invalid_argument("sequence must contain at least one item");
  for (const auto& item : items) require_same_dimension(eta, item);
}

std::vector<std::string> labels_or_default(std::vector<std::string> labels, std::size_t count) {
  if (labels.empty()) return default_labels(count);
  if (labels.size() != count)
    throw std::invalid_argument("label count does not match item count");
  return labels;
}

}  // namespace

std::string_view to_string(Fold fold) noexcept { return fold == Fold::left ? "left" : "right"; }

Fold parse_fold(std::string_view text) {
  if (text == "left" || text == "L") return Fold::left;
  if (text == "right" || text == "R") return Fold::right;
  throw ConfigError("fold must be 'left' or 'right', got '" + std::string(text) + "'");
}

LeftFold::LeftFold(State eta, double theta, RngStream rng)
    : state_(std::move(eta)), theta_(theta), rng_(rng) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
}

void LeftFold::append(const State& item) {
  state_ = bundle(state_, item, theta_, rng_);
  ++count_;
}

State l_state(std::span<const State> items, const State& eta, double theta, RngStream& rng) {
  require_items(items, eta);
  State acc = eta;
  for (const auto& item : items) acc = bundle(acc, item, theta, rng);
  return acc;
}

State r_state(std::span<const State> items, const State& eta, double theta, RngStream& rng) {
  require_items(items, eta);
  State acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) acc = bundle(items[i], acc, theta, rng);
  return bundle(eta, acc, theta, rng);
}

State fold_state(std::span<const State> items, const State& eta, double theta, RngStream& rng,
                 Fold fold) {
  return fold == Fold::left ? l_state(items, eta, theta, rng) : r_state(items, eta, theta, rng);
}

MemoryState memory_state(std::span<const State> items, const State& eta,
                         const AlgebraParams& params, const RngStream& rng) {
  params.validate();
  auto l_rng = rng.child(0);
  auto r_rng = rng.child(1);
  State l = l_state(items, eta, params.theta, l_rng);
  State r = r_state(items, eta, params.theta, r_rng);
  return MemoryState{std::move(l), std::move(r), params};
}

std::vector<State> make_markers(std::size_t count, std::uint32_t dimension, double q,
                                RngStream& rng) {
  std::vector<State> markers;
  markers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) markers.push_back(random_qstate(dimension, q, rng));
  return markers;
}

std::vector<std::string> default_labels(std::size_t count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) labels.push_back(std::to_string(i));
  return labels;
}

EncodedSequence encode_position_markers(std::span<const State> items,
                                        std::vector<State> markers, const State& eta,
                                        double theta, RngStream& rng, Fold fold,
                                        std::vector<std::string> labels) {
  require_items(items, eta);
  if (markers.size() < items.size())
    throw std::invalid_argument("position-marker encoding needs " + std::to_string(items.size()) +
                                " markers, got " + std::to_string(markers.size()));
  std::vector<State> terms;
  terms.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) terms.push_back(bind(items[i], markers[i]));
  return EncodedSequence{Scheme::position_marker, fold, fold_state(terms, eta, theta, rng, fold),
                         labels_or_default(std::move(labels), items.size()), std::move(markers)};
}

EncodedSequence encode_chaining(std::span<const State> items, const State& eta, double theta,
                                RngStream& rng, Fold fold, std::vector<std::string> labels) {
  require_items(items, eta);
  std::vector<State> terms;
  terms.reserve(items.size());
  terms.push_back(bind(items[0], eta));
  for (std::size_t i = 1; i < items.size(); ++i) terms.push_back(bind(items[i], items[i - 1]));
  return EncodedSequence{Scheme::chaining, fold, fold_state(terms, eta, theta, rng, fold),
                         labels_or_default(std::move(labels), items.size()), std::nullopt};
}

State cue(const State& container, const State& cue_item) { return bind(container, cue_item); }

}  // namespace memstate
