#pragma once

#include "hon/ingest.hpp"
#include "hon/rules.hpp"

namespace hon::kernels {

/// Reference counter: one pass, one table.
CountTable count_observations_serial(const Corpus& corpus, int max_order);

/// Trajectories are split into contiguous chunks, each counted into a
/// thread-local trie; the partial tables are summed afterwards. Integer
/// merging makes the result identical to the serial one.
CountTable count_observations_parallel(const Corpus& corpus, int max_order);

}  // namespace hon::kernels
