#pragma once

#include "specclust/sparse.hpp"

#include <cstdint>
#include <vector>

namespace specclust {

/// Planted-partition stochastic block model.
struct SbmConfig {
  std::vector<std::size_t> block_sizes;
  double p_in = 0.3;  ///< edge probability inside a block
  double p_out = 0.01; ///< edge probability between blocks
  std::uint64_t seed = 0;
};

struct SbmGraph {
  CooMatrix adjacency; ///< symmetric, unit weights, canonical, no diagonal
  std::vector<std::size_t> labels; ///< block of each node
};

/// Throws InvalidArgument unless 0 <= p_out <= p_in <= 1 and all blocks are
/// non-empty.
void validate(const SbmConfig& cfg);

/// Every unordered pair is an independent Bernoulli trial. Each block pair
/// (a, b) draws from its own RNG substream keyed by (seed, a, b) and skips
/// geometrically between successes, so the graph depends only on the seed.
SbmGraph sbm_generate(const SbmConfig& cfg);

} // namespace specclust
