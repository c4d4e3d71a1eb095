#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dk/types.hpp"

namespace dk {

// One class of the mixture a synthetic model draws from: the class latent
// center plus this model's simplex weight for the class.
struct MixtureComponent {
  double weight = 0.0;
  Vector center;
};

// Everything needed to generate one synthetic model's embeddings of the
// shared corpus. Item i always belongs to class (i mod n_classes), so the
// same n_items yields a comparable corpus across models.
struct SyntheticModelSpec {
  Index n_items = 0;
  int latent_dim = 0;
  std::vector<MixtureComponent> mixture;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;

  // Throws unless: n_items >= 2, latent_dim >= 1, at least one component,
  // weights nonnegative and summing to 1 (loose tolerance so coarse decimals
  // like 0.33 pass), centers of matching dimension with pairwise dot
  // products in [0, 1].
  void validate() const;
};

// Row i = p_c * center_c + (1 - p_c) * centroid + noise_scale * (5 * u_i +
// (2 - w_c) * eps_i) with c = i mod n_classes, p_c = 0.4 + 0.6 * w_c, and
// centroid the mean of all class centers. u_i is a fixed per-item
// fingerprint keyed by (i, j) only -- the shared corpus every model embeds
// -- while eps_i is standard normal keyed by (seed, i, j). Heavier-weighted
// classes keep their own center with less blur; lighter ones drift toward
// the shared centroid and scramble more of their fingerprints, so models
// with nearby simplex weights induce nearby k-NN geometries.
EmbeddingMatrix generate_embeddings(const SyntheticModelSpec& spec);

// Two independent draws from one RDPG; the null-validity experiments start
// here.
std::pair<SparseMatrix, SparseMatrix> generate_rdpg_pair(const LatentPositions& latent,
                                                         std::uint64_t seed_first,
                                                         std::uint64_t seed_second);

// Rank-2 latent positions realizing a two-block SBM: first half of the nodes
// in one block, second half in the other, with the given within-/between-
// block edge probabilities (requires 0 <= p_between <= p_within <= 1).
LatentPositions two_block_latents(Index n, double p_within, double p_between);

// The seven simplex weight vectors of the synthetic model family: three
// vertices, three edge midpoints, and the (coarse decimal) centroid.
std::vector<Vector> simplex_family();

// Class center mu_c = 0.8 e_c + 0.1 * ones in R^n_classes; any two centers
// have dot products inside [0, 1].
Vector simplex_center(int c, int n_classes);

// Spec for one family member: n_classes = weights.size() classes on the
// shared centers, at the given corpus size and noise level.
SyntheticModelSpec simplex_model_spec(const Vector& weights, Index n_items,
                                      double noise_scale, std::uint64_t seed);

}  // namespace dk
