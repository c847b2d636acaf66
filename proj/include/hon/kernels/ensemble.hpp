#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hon/walk.hpp"

namespace hon::kernels {

/// Walk ensembles for held-out-tail accuracy. Element [r * holdout + h - 1]
/// is the number of cases whose first h generated entities were all correct
/// in repeat r. Case i in repeat r always draws from stream (seed, i, r).
std::vector<std::uint64_t> accuracy_counts_serial(const Network& network, std::span<const TestCase> cases,
                                                  std::size_t holdout, std::size_t repeats,
                                                  std::uint64_t seed);
std::vector<std::uint64_t> accuracy_counts_parallel(const Network& network, std::span<const TestCase> cases,
                                                    std::size_t holdout, std::size_t repeats,
                                                    std::uint64_t seed);

/// Number of samples (start drawn from `start_cdf`) whose entity after
/// exactly `steps` steps equals the start entity. Sample s uses stream
/// (seed, s).
std::uint64_t return_hits_serial(const Network& network, std::span<const double> start_cdf,
                                 std::size_t steps, std::size_t samples, std::uint64_t seed);
std::uint64_t return_hits_parallel(const Network& network, std::span<const double> start_cdf,
                                   std::size_t steps, std::size_t samples, std::uint64_t seed);

}  // namespace hon::kernels
