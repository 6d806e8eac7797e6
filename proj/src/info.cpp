#include "memstate/info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memstate/errors.hpp"
#include "memstate/kernels.hpp"
#include "memstate/sequence.hpp"

namespace memstate {

namespace {

double cell_term(double p_ab, double p_a, double p_b) {
  if (p_ab <= 0.0) return 0.0;
  return p_ab * std::log(p_ab / (p_a * p_b));
}

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("approximate MI needs q in (0, 1)");
}

// 8q(1-q) c^2 where c = (2*agree - N) / (2N) = -(2*differ - N) / (2N).
double quadratic_mi(std::int64_t centred_twice, std::uint32_t dimension, double q) {
  const double c = static_cast<double>(centred_twice) / (2.0 * static_cast<double>(dimension));
  return 8.0 * q * (1.0 - q) * c * c;
}

}  // namespace

std::string_view to_string(MiMode mode) noexcept {
  return mode == MiMode::exact ? "exact" : "approx";
}

MiMode parse_mi_mode(std::string_view text) {
  if (text == "exact") return MiMode::exact;
  if (text == "approx") return MiMode::approx;
  throw ConfigError("mode must be 'exact' or 'approx', got '" + std::string(text) + "'");
}

JointTable joint_distribution(const State& x, const State& y) {
  require_same_dimension(x, y);
  const auto n = static_cast<double>(x.dimension());
  const std::uint64_t both = kernels::parallel::popcount_and(x.words(), y.words());
  const std::uint64_t x_ones = kernels::parallel::popcount(x.words());
  const std::uint64_t y_ones = kernels::parallel::popcount(y.words());
  const std::uint64_t only_x = x_ones - both;
  const std::uint64_t only_y = y_ones - both;
  const std::uint64_t neither = x.dimension() - both - only_x - only_y;
  return JointTable{static_cast<double>(neither) / n, static_cast<double>(only_y) / n,
                    static_cast<double>(only_x) / n, static_cast<double>(both) / n};
}

double mutual_information(const JointTable& t) {
  const double x1 = t.x_active();
  const double x0 = t.p00 + t.p01;
  const double y1 = t.y_active();
  const double y0 = t.p00 + t.p10;
  // Diagonal and off-diagonal pairs are summed separately so that swapping the
  // arguments (which swaps p01 and p10) yields the same floating-point result.
  const double diagonal = cell_term(t.p00, x0, y0) + cell_term(t.p11, x1, y1);
  const double off = cell_term(t.p01, x0, y1) + cell_term(t.p10, x1, y0);
  return std::max(0.0, diagonal + off);
}

double mutual_information_exact(const State& x, const State& y) {
  return mutual_information(joint_distribution(x, y));
}

double mutual_information_approx(const State& x, const State& y, double q) {
  require_same_dimension(x, y);
  require_q(q);
  const std::uint64_t differ = kernels::parallel::popcount_xor(x.words(), y.words());
  const auto agree = static_cast<std::int64_t>(x.dimension() - differ);
  return quadratic_mi(2 * agree - static_cast<std::int64_t>(x.dimension()), x.dimension(), q);
}

double mutual_information_approx_by_distance(const State& x, const State& y, double q) {
  require_same_dimension(x, y);
  require_q(q);
  const auto differ = static_cast<std::int64_t>(kernels::parallel::popcount_xor(x.words(), y.words()));
  return quadratic_mi(static_cast<std::int64_t>(x.dimension()) - 2 * differ, x.dimension(), q);
}

double mutual_information(const State& x, const State& y, MiMode mode, double q) {
  return mode == MiMode::exact ? mutual_information_exact(x, y)
                               : mutual_information_approx(x, y, q);
}

double mutual_information(const JointTable& table, MiMode mode, double q) {
  if (mode == MiMode::exact) return mutual_information(table);
  require_q(q);
  const double c = table.p00 + table.p11 - 0.5;
  return 8.0 * q * (1.0 - q) * c * c;
}

double mi_memory(const MemoryState& memory, const State& x, double rho_r, double rho_l,
                 MiMode mode) {
  if (!(rho_r >= 0.0 && rho_r <= 1.0) || !(rho_l >= 0.0 && rho_l <= 1.0))
    throw std::invalid_argument("memory weights must lie in [0, 1]");
  const double from_r = mutual_information(memory.r, x, mode, memory.params.q);
  const double from_l = mutual_information(memory.l, x, mode, memory.params.q);
  return rho_r * from_r + rho_l * from_l;
}

std::size_t MIProfile::rank_of(std::string_view label) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].label == label) return i;
  throw std::out_of_range("label '" + std::string(label) + "' not in profile");
}

double MIProfile::value_of(std::string_view label) const { return entries[rank_of(label)].mi; }

MIProfile mi_profile(const State& container, std::span<const LabelledState> candidates,
                     MiMode mode, double q) {
  if (candidates.empty()) throw std::invalid_argument("mi_profile needs at least one candidate");
  MIProfile profile;
  profile.entries.reserve(candidates.size());
  for (const auto& c : candidates)
    profile.entries.push_back({c.label, mutual_information(container, c.state, mode, q)});
  std::stable_sort(profile.entries.begin(), profile.entries.end(),
                   [](const MIProfileEntry& a, const MIProfileEntry& b) {
                     if (a.mi != b.mi) return a.mi > b.mi;
                     return a.label < b.label;
                   });
  return profile;
}

}  // namespace memstate
