#include "dk/synth.hpp"

#include <cmath>
#include <string>

#include "dk/error.hpp"
#include "dk/rdpg.hpp"
#include "dk/rng.hpp"

namespace dk {

namespace {

// Coarse-decimal weight vectors ("0.33") must still count as on-simplex.
constexpr double kWeightSumTol = 0.02;

}  // namespace

void SyntheticModelSpec::validate() const {
  if (n_items < 2) throw InputError("spec needs n_items >= 2");
  if (latent_dim < 1) throw InputError("spec needs latent_dim >= 1");
  if (mixture.empty()) throw InputError("spec needs at least one mixture component");

  double sum = 0.0;
  for (const auto& comp : mixture) {
    if (comp.weight < 0.0) throw InputError("mixture weights must be nonnegative");
    sum += comp.weight;
    if (comp.center.size() != latent_dim)
      throw InputError("mixture center dimension does not match latent_dim",
                       ErrorCode::ShapeMismatch);
    require_finite(comp.center, "mixture center");
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    throw InputError("mixture weights must sum to 1, got " + std::to_string(sum));
  if (noise_scale < 0.0) throw InputError("noise_scale must be nonnegative");

  for (std::size_t a = 0; a < mixture.size(); ++a)
    for (std::size_t b = a; b < mixture.size(); ++b) {
      const double dot = mixture[a].center.dot(mixture[b].center);
      if (dot < -1e-9 || dot > 1.0 + 1e-9)
        throw InputError("mixture centers must have pairwise dot products in [0, 1]");
    }
}

namespace {

// A class never loses its identity entirely: zero weight still pulls 0.4 of
// the way toward the class center. Below that floor the class cloud sits so
// close to the shared centroid that its neighbor ranks degenerate into
// coin flips, which makes the kernel resample-unstable.
constexpr double kIdentityFloor = 0.4;

// Every item also carries a fixed fingerprint keyed by its index alone, not
// by the model seed, scaled by noise_scale * kCorpusScale. This plays the
// role of the shared corpus: the items are the same texts no matter which
// model embeds them. Without it, within-class neighbor ranks are re-rolled
// from scratch on every draw, and that resampling noise swamps the
// between-model signal in kernel distances. With it, two draws of the same
// model agree on most neighbor picks, while the seed-keyed term below blurs
// the fingerprints of lightly weighted classes and rewires their edges.
constexpr std::uint64_t kCorpusKey = 0x636f72707573ULL;  // "corpus"
constexpr double kCorpusScale = 5.0;

}  // namespace

EmbeddingMatrix generate_embeddings(const SyntheticModelSpec& spec) {
  spec.validate();
  const int n_classes = static_cast<int>(spec.mixture.size());

  // Fully weighted classes sit at their own center; lighter classes drift
  // toward the centroid of all centers (a "generic" representation). The
  // drift is what a k-NN graph can see: it rewires how often classes pick
  // each other as neighbors, whereas a pure noise-scale change would leave
  // neighbor ranks, and hence the kernel, almost unchanged.
  Vector centroid = Vector::Zero(spec.latent_dim);
  for (const auto& comp : spec.mixture) centroid += comp.center;
  centroid /= static_cast<double>(n_classes);

  EmbeddingMatrix emb;
  emb.values.resize(spec.n_items, spec.latent_dim);
  emb.ids.reserve(static_cast<std::size_t>(spec.n_items));
  for (Index i = 0; i < spec.n_items; ++i) {
    const auto& comp = spec.mixture[static_cast<std::size_t>(i % n_classes)];
    const double pull = kIdentityFloor + (1.0 - kIdentityFloor) * comp.weight;
    const double spread = spec.noise_scale * (2.0 - comp.weight);
    for (int j = 0; j < spec.latent_dim; ++j) {
      const double corpus = gaussian(mix_key(kCorpusKey, static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(j)));
      const double eps = gaussian(mix_key(spec.seed, static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(j)));
      emb.values(i, j) = pull * comp.center[j] + (1.0 - pull) * centroid[j] +
                         spec.noise_scale * kCorpusScale * corpus + spread * eps;
    }
    emb.ids.push_back("item_" + std::to_string(i));
  }
  return emb;
}

std::pair<SparseMatrix, SparseMatrix> generate_rdpg_pair(const LatentPositions& latent,
                                                         std::uint64_t seed_first,
                                                         std::uint64_t seed_second) {
  RdpgParams params;
  params.latent = latent;
  return {sample_rdpg(params, seed_first), sample_rdpg(params, seed_second)};
}

LatentPositions two_block_latents(Index n, double p_within, double p_between) {
  if (n < 2) throw ConfigError("two_block_latents needs n >= 2");
  if (!(0.0 <= p_between && p_between <= p_within && p_within <= 1.0))
    throw ConfigError("two_block_latents needs 0 <= p_between <= p_within <= 1");

  // z = (a, ±b) with a^2 + b^2 = p_within and a^2 - b^2 = p_between.
  const double a = std::sqrt((p_within + p_between) / 2.0);
  const double b = std::sqrt((p_within - p_between) / 2.0);

  LatentPositions latent;
  latent.values.resize(n, 2);
  for (Index i = 0; i < n; ++i) {
    latent.values(i, 0) = a;
    latent.values(i, 1) = (i < n / 2) ? b : -b;
  }
  latent.source = "two_block(p_within=" + std::to_string(p_within) +
                  ", p_between=" + std::to_string(p_between) + ")";
  return latent;
}

std::vector<Vector> simplex_family() {
  const std::vector<std::vector<double>> rows = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0},  {0.0, 0.0, 1.0},   {0.5, 0.5, 0.0},
      {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5},  {0.33, 0.33, 0.33},
  };
  std::vector<Vector> family;
  family.reserve(rows.size());
  for (const auto& row : rows) {
    Vector w(3);
    for (int j = 0; j < 3; ++j) w[j] = row[static_cast<std::size_t>(j)];
    family.push_back(w);
  }
  return family;
}

Vector simplex_center(int c, int n_classes) {
  if (n_classes < 1 || c < 0 || c >= n_classes)
    throw ConfigError("simplex_center needs 0 <= c < n_classes");
  Vector center = Vector::Constant(n_classes, 0.1);
  center[c] += 0.8;
  return center;
}

SyntheticModelSpec simplex_model_spec(const Vector& weights, Index n_items, double noise_scale,
                                      std::uint64_t seed) {
  const int n_classes = static_cast<int>(weights.size());
  SyntheticModelSpec spec;
  spec.n_items = n_items;
  spec.latent_dim = n_classes;
  spec.noise_scale = noise_scale;
  spec.seed = seed;
  spec.mixture.reserve(static_cast<std::size_t>(n_classes));
  for (int c = 0; c < n_classes; ++c)
    spec.mixture.push_back({weights[c], simplex_center(c, n_classes)});
  spec.validate();
  return spec;
}

}  // namespace dk
