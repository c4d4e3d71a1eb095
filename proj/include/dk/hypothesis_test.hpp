#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dk/omnibus.hpp"
#include "dk/spectral.hpp"
#include "dk/types.hpp"

namespace dk {

// Per-datum bootstrap null distribution: row b holds the distances of
// replicate b, column i tracks datum i only (no pooling across datums).
struct NullDistribution {
  int n_bootstrap = 0;     // B
  Matrix distances;        // B x N, nonnegative
  int dim = 0;             // embedding dimension shared with the observed run
  std::uint64_t seed = 0;  // base seed; replicate b draws with mix_key(seed, b)
};

struct BootstrapOptions {
  // Re-sparsify each replicate like a k-NN graph: keep each node's k realized
  // edges with the largest estimated dot products, then re-symmetrize with
  // the kernel's rule. Off by default — the bootstrap resamples plain
  // Bernoulli graphs.
  bool resparsify = false;
  EigOptions eig;
};

// Embeds a1 once, then for b = 0..B-1 samples a graph from the estimated
// latent positions and records the per-datum omnibus distances between a1 and
// the sample. Replicates run in parallel; output depends only on (a1, B, d,
// seed). Numerical failures are rethrown with the replicate index attached.
NullDistribution bootstrap_null(const DataKernel& a1, int n_bootstrap, int d,
                                std::uint64_t seed, const BootstrapOptions& opts = {});

// p_i = (1 + #{b : null[b][i] >= observed[i]}) / (B + 1), always within
// [1/(B+1), 1]; the +1 keeps small-B tests valid and p strictly positive.
Vector p_values(const NullDistribution& null, const Vector& observed);

struct TestOptions {
  int k = 16;
  int n_bootstrap = 200;
  std::uint64_t seed = 0;
  int dim = 0;  // 0 = pick by the scree elbow of the first kernel
  Symmetrization rule = Symmetrization::Max;
  bool normalize_rows = false;
  bool resparsify_bootstrap = false;
  EigOptions eig;
};

// Test conclusions plus the fully resolved configuration, so a report alone
// is enough to reproduce the run.
struct TestReport {
  std::vector<std::string> ids;
  Vector observed_distances;
  Vector p_values;

  int k = 0;
  int dim = 0;
  int n_bootstrap = 0;
  std::uint64_t seed = 0;
  Symmetrization rule = Symmetrization::Max;
  bool normalized_rows = false;
  bool resparsified_bootstrap = false;
};

// Full pipeline: build both kernels, pick the embedding dimension, bootstrap
// the null from the first kernel, compare against the observed pair
// embedding. The embeddings must list identical ids in identical order.
TestReport run_test(const EmbeddingMatrix& emb1, const EmbeddingMatrix& emb2,
                    const TestOptions& opts);

// Same, starting from prebuilt kernels on one corpus.
TestReport run_test_kernels(const DataKernel& a1, const DataKernel& a2,
                            const TestOptions& opts);

}  // namespace dk
