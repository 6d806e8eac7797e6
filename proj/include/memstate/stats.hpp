#pragma once

#include <span>
#include <vector>

namespace memstate {

/// Ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation (Pearson correlation of average ranks). Returns 0
/// when either side is constant. Throws on size mismatch or fewer than 2 values.
double spearman(std::span<const double> x, std::span<const double> y);

/// Spearman correlation of `values` against positions 1..n.
double spearman_with_position(std::span<const double> values);

}  // namespace memstate
