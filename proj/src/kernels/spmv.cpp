#include "hon/kernels/spmv.hpp"

namespace hon::kernels {

TransposedTransitions transpose_transitions(const Network& network) {
  TransposedTransitions m;
  m.n = network.node_count();
  std::vector<std::size_t> count(m.n + 1, 0);
  for (NodeId u = 0; u < m.n; ++u)
    for (NodeId v : network.successors(u)) ++count[v + 1];
  for (std::size_t j = 0; j < m.n; ++j) count[j + 1] += count[j];
  m.offsets = count;
  m.sources.resize(network.edge_count());
  m.probs.resize(network.edge_count());
  std::vector<std::size_t> fill(m.offsets.begin(), m.offsets.end() - 1);
  for (NodeId u = 0; u < m.n; ++u) {
    auto succ = network.successors(u);
    auto w = network.weights(u);
    const double out = network.out_weight(u);
    if (succ.empty()) m.dangling.push_back(u);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      const std::size_t slot = fill[succ[i]]++;
      m.sources[slot] = u;
      m.probs[slot] = w[i] / out;
    }
  }
  return m;
}

void propagate_serial(const TransposedTransitions& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < m.n; ++j) {
    double acc = 0.0;
    for (std::size_t k = m.offsets[j]; k < m.offsets[j + 1]; ++k) acc += x[m.sources[k]] * m.probs[k];
    y[j] = acc;
  }
}

void propagate_parallel(const TransposedTransitions& m, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(m.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = m.offsets[j]; k < m.offsets[j + 1]; ++k) acc += x[m.sources[k]] * m.probs[k];
    y[static_cast<std::size_t>(j)] = acc;
  }
}

}  // namespace hon::kernels
