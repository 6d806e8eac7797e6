#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memstate/algebra.hpp"

namespace memstate {

/// Bracketing of a bundled sequence: ((eta + a) + b) + c versus
/// eta + (a + (b + c)).
enum class Fold { left, right };

std::string_view to_string(Fold fold) noexcept;
Fold parse_fold(std::string_view text);

/// Streaming left fold: starts at eta and bundles each appended item on top.
/// Single owner; the right fold has no streaming counterpart because it needs
/// the whole chunk.
class LeftFold {
 public:
  LeftFold(State eta, double theta, RngStream rng);

  void append(const State& item);
  const State& state() const noexcept { return state_; }
  std::size_t size() const noexcept { return count_; }

 private:
  State state_;
  double theta_;
  RngStream rng_;
  std::size_t count_ = 0;
};

/// (...((eta + a) + b) + ...) + last, one fresh noise block per bundle.
State l_state(std::span<const State> items, const State& eta, double theta, RngStream& rng);
/// eta + (a + (b + (... + last))), built from the innermost pair outwards.
State r_state(std::span<const State> items, const State& eta, double theta, RngStream& rng);
State fold_state(std::span<const State> items, const State& eta, double theta, RngStream& rng,
                 Fold fold);

/// Dual representation of one sequence.
struct MemoryState {
  State l;
  State r;
  AlgebraParams params;
};

/// L and R from the same items; the two folds draw from rng.child(0) and
/// rng.child(1) respectively.
MemoryState memory_state(std::span<const State> items, const State& eta,
                         const AlgebraParams& params, const RngStream& rng);

enum class Scheme { plain, position_marker, chaining };

struct EncodedSequence {
  Scheme scheme = Scheme::plain;
  Fold fold = Fold::left;
  State state;
  std::vector<std::string> item_labels;
  /// Present only for Scheme::position_marker.
  std::optional<std::vector<State>> marker_states;
};

/// i.i.d. q-states used as position markers.
std::vector<State> make_markers(std::size_t count, std::uint32_t dimension, double q,
                                RngStream& rng);

/// Labels "1", "2", ... when `labels` is empty.
std::vector<std::string> default_labels(std::size_t count);

/// eta + a*m1 + b*m2 + ..., bracketed per `fold`.
EncodedSequence encode_position_markers(std::span<const State> items,
                                        std::vector<State> markers, const State& eta,
                                        double theta, RngStream& rng, Fold fold,
                                        std::vector<std::string> labels = {});

/// eta + a*eta + b*a + c*b + ..., bracketed per `fold`.
EncodedSequence encode_chaining(std::span<const State> items, const State& eta, double theta,
                                RngStream& rng, Fold fold, std::vector<std::string> labels = {});

/// Exposes the context bound to `cue_item` inside `container` (binding).
State cue(const State& container, const State& cue_item);

}  // namespace memstate
