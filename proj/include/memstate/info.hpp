#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memstate/state.hpp"

namespace memstate {

struct MemoryState;

/// Empirical joint distribution of two states' sites. Cell p_ab counts sites
/// where the first state is a and the second is b.
struct JointTable {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double x_active() const noexcept { return p10 + p11; }
  double y_active() const noexcept { return p01 + p11; }
};

enum class MiMode { exact, approx };

std::string_view to_string(MiMode mode) noexcept;
/// Throws ConfigError for anything but "exact" or "approx".
MiMode parse_mi_mode(std::string_view text);

JointTable joint_distribution(const State& x, const State& y);

/// Mutual information of the joint table in nats, with 0 ln 0 = 0.
double mutual_information(const JointTable& table);
double mutual_information_exact(const State& x, const State& y);

/// Quadratic approximation 8q(1-q)(1/2 - Q(x*y))^2 in nats, `q` being the
/// generating activity.
double mutual_information_approx(const State& x, const State& y, double q);
/// Same quantity written as 8q(1-q)(d(x,y) - 1/2)^2.
double mutual_information_approx_by_distance(const State& x, const State& y, double q);

double mutual_information(const State& x, const State& y, MiMode mode, double q);
/// Either form evaluated on a joint table; approx uses Q(x*y) = p00 + p11.
double mutual_information(const JointTable& table, MiMode mode, double q);

/// rho_r * I(R; x) + rho_l * I(L; x). Approximate mode uses the memory's q.
double mi_memory(const MemoryState& memory, const State& x, double rho_r, double rho_l,
                 MiMode mode);

struct LabelledState {
  std::string label;
  State state;
};

struct MIProfileEntry {
  std::string label;
  double mi = 0.0;
};

/// Candidates ranked by mutual information with a container state: descending
/// by value, ties by label.
struct MIProfile {
  std::vector<MIProfileEntry> entries;

  const MIProfileEntry& top() const { return entries.front(); }
  /// Rank of `label` (0 = best); throws std::out_of_range when absent.
  std::size_t rank_of(std::string_view label) const;
  double value_of(std::string_view label) const;
};

MIProfile mi_profile(const State& container, std::span<const LabelledState> candidates,
                     MiMode mode = MiMode::exact, double q = 0.5);

}  // namespace memstate
