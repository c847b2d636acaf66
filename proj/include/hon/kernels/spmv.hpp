#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hon/wiring.hpp"

namespace hon::kernels {

/// Row-normalised transition matrix stored by column (incoming edges per
/// node, sources ascending), so y = P^T x is a pull over each column with a
/// fixed summation order.
struct TransposedTransitions {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> sources;
  std::vector<double> probs;
  std::vector<NodeId> dangling;
};

TransposedTransitions transpose_transitions(const Network& network);

/// y[j] = sum_i x[i] p(i->j).
void propagate_serial(const TransposedTransitions& m, std::span<const double> x, std::span<double> y);

/// Columns are split across threads; each y[j] is summed by one thread in
/// the same order as the serial kernel, so the output is bitwise identical.
void propagate_parallel(const TransposedTransitions& m, std::span<const double> x, std::span<double> y);

}  // namespace hon::kernels
