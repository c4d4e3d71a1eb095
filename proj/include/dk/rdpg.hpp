#pragma once

#include <cstdint>

#include "dk/types.hpp"

namespace dk {

// Latent positions plus the clipping window applied to their dot products.
struct RdpgParams {
  LatentPositions latent;  // N x d
  double clip_low = 0.0;
  double clip_high = 1.0;
};

// P = clamp(Z Z^T, clip_low, clip_high) with a zeroed diagonal.
Matrix edge_probabilities(const RdpgParams& params);

// Symmetric hollow 0/1 adjacency with each unordered pair (i, j) drawn
// Bernoulli(P_ij). The coin for pair (i, j) is keyed by (seed, i, j), so the
// sample is a pure function of (params, seed) independent of iteration order
// or thread scheduling.
SparseMatrix sample_rdpg(const RdpgParams& params, std::uint64_t seed);

}  // namespace dk
