#include "dk/rdpg.hpp"

#include <algorithm>
#include <vector>

#include "dk/error.hpp"
#include "dk/parallel.hpp"
#include "dk/rng.hpp"

namespace dk {

namespace {

void check_params(const RdpgParams& params) {
  if (params.latent.values.rows() < 1 || params.latent.values.cols() < 1)
    throw InputError("latent positions must be a nonempty matrix", ErrorCode::ShapeMismatch);
  if (!(params.clip_low <= params.clip_high))
    throw ConfigError("clip_low must not exceed clip_high");
  require_finite(params.latent.values, "latent positions");
}

}  // namespace

Matrix edge_probabilities(const RdpgParams& params) {
  check_params(params);
  const Matrix& z = params.latent.values;
  Matrix p = z * z.transpose();
  p = p.cwiseMax(params.clip_low).cwiseMin(params.clip_high);
  p.diagonal().setZero();
  return p;
}

SparseMatrix sample_rdpg(const RdpgParams& params, std::uint64_t seed) {
  check_params(params);
  const Matrix& z = params.latent.values;
  const Index n = z.rows();

  // One edge bucket per row i holding the sampled pairs (i, j), j > i.
  // Buckets are disjoint, so rows parallelize without synchronization.
  std::vector<std::vector<Index>> partners(static_cast<std::size_t>(n));
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t row) {
    const Index i = static_cast<Index>(row);
    auto& out = partners[row];
    for (Index j = i + 1; j < n; ++j) {
      const double p =
          std::clamp(z.row(i).dot(z.row(j)), params.clip_low, params.clip_high);
      if (p <= 0.0) continue;
      const double u = uniform01(
          mix_key(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
      if (u < p) out.push_back(j);  // u < 1 always, so p = 1 forces the edge
    }
  });

  std::size_t n_edges = 0;
  for (const auto& bucket : partners) n_edges += bucket.size();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * n_edges);
  for (Index i = 0; i < n; ++i)
    for (Index j : partners[static_cast<std::size_t>(i)]) {
      triplets.emplace_back(i, j, 1.0);
      triplets.emplace_back(j, i, 1.0);
    }

  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

}  // namespace dk
