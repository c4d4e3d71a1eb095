#include "dk/model_manifold.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dk/error.hpp"
#include "dk/omnibus.hpp"
#include "dk/parallel.hpp"

namespace dk {

namespace {

constexpr int kMaxAutoDim = 10;

}  // namespace

void ModelDistanceMatrix::validate() const {
  if (n_models < 2) throw InputError("distance matrix needs at least 2 models");
  if (values.rows() != n_models || values.cols() != n_models)
    throw InputError("distance matrix shape does not match n_models", ErrorCode::ShapeMismatch);
  if (static_cast<int>(model_labels.size()) != n_models)
    throw InputError("model label count does not match n_models", ErrorCode::ShapeMismatch);
  require_finite(values, "model distance matrix");
  for (Index i = 0; i < values.rows(); ++i) {
    if (values(i, i) != 0.0) throw InputError("distance matrix diagonal must be zero");
    for (Index j = 0; j < i; ++j) {
      if (values(i, j) < 0.0) throw InputError("distances must be nonnegative");
      if (values(i, j) != values(j, i))
        throw InputError("distance matrix must be symmetric");
    }
  }
}

ModelDistanceMatrix pairwise_distances(const std::vector<DataKernel>& kernels,
                                       const ManifoldOptions& opts) {
  const int m = static_cast<int>(kernels.size());
  if (m < 2) throw InputError("pairwise_distances needs at least 2 kernels");
  for (const auto& kernel : kernels) kernel.validate();
  for (int i = 1; i < m; ++i) {
    if (kernels[i].n_nodes() != kernels[0].n_nodes())
      throw InputError("kernels disagree on node count", ErrorCode::ShapeMismatch);
    if (kernels[i].ids != kernels[0].ids)
      throw InputError("kernels disagree on id order; all models must share one corpus",
                       ErrorCode::IdMismatch);
  }

  const int d =
      (opts.dim > 0)
          ? opts.dim
          : select_dimension(kernels[0].adjacency,
                             static_cast<int>(std::min<Index>(kMaxAutoDim, kernels[0].n_nodes())),
                             opts.eig);

  // Unrolled strict upper triangle: job p covers pair (pairs[p].first, .second).
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) pairs.emplace_back(a, b);

  ModelDistanceMatrix dist;
  dist.n_models = m;
  dist.values = Matrix::Zero(m, m);
  dist.dim = d;
  dist.normalized = opts.normalized;
  dist.model_labels.reserve(m);
  for (int a = 0; a < m; ++a) dist.model_labels.push_back("model_" + std::to_string(a));

  parallel_for(0, pairs.size(), [&](std::size_t p) {
    const auto [a, b] = pairs[p];
    try {
      OmnibusResult joint =
          joint_embed(kernels[a].adjacency, kernels[b].adjacency, d, opts.eig);
      double value = spectral_norm(joint.z_first.values - joint.z_second.values);
      if (opts.normalized) {
        const double denom = std::min(spectral_norm(joint.z_first.values),
                                      spectral_norm(joint.z_second.values));
        if (denom <= 0.0)
          throw NumericalError("normalized distance undefined: an embedding has zero norm");
        value /= denom;
      }
      dist.values(a, b) = dist.values(b, a) = value;
    } catch (const NumericalError& e) {
      throw NumericalError("model pair (" + std::to_string(a) + ", " + std::to_string(b) +
                               "): " + e.what(),
                           e.iterations());
    }
  });
  return dist;
}

ModelManifold classical_mds(const ModelDistanceMatrix& dist, int d_out) {
  dist.validate();
  const int m = dist.n_models;
  if (d_out < 1 || d_out > m - 1)
    throw ConfigError("mds dimension must be in [1, M-1], got " + std::to_string(d_out) +
                      " with M=" + std::to_string(m));

  // B = -1/2 J (D∘D) J, J = I - 11^T/M: the Gram matrix of centered
  // coordinates whenever D is Euclidean-realizable.
  Matrix squared = dist.values.cwiseAbs2();
  Matrix centering = Matrix::Identity(m, m) - Matrix::Constant(m, m, 1.0 / m);
  Matrix gram = -0.5 * centering * squared * centering;
  gram = 0.5 * (gram + gram.transpose());  // scrub numerical asymmetry

  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success)
    throw NumericalError("MDS eigendecomposition failed");

  // Descending signed order (Eigen returns ascending).
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return solver.eigenvalues()[a] > solver.eigenvalues()[b]; });

  ModelManifold manifold;
  manifold.eigenvalue_spectrum.resize(m);
  for (int i = 0; i < m; ++i)
    manifold.eigenvalue_spectrum[i] = solver.eigenvalues()[order[i]];

  Matrix top(m, d_out);
  for (int c = 0; c < d_out; ++c) top.col(c) = solver.eigenvectors().col(order[c]);
  canonicalize_signs(top);
  Vector scale(d_out);
  for (int c = 0; c < d_out; ++c)
    scale[c] = std::sqrt(std::max(0.0, manifold.eigenvalue_spectrum[c]));
  manifold.coordinates = top * scale.asDiagonal();
  // Eigenvectors of B with nonzero eigenvalue are orthogonal to the ones
  // vector already; recentering only scrubs rounding residue.
  const Eigen::RowVectorXd mean = manifold.coordinates.colwise().mean();
  manifold.coordinates.rowwise() -= mean;

  const double total = manifold.eigenvalue_spectrum.cwiseAbs().sum();
  if (total > 0.0) {
    double negative = 0.0;
    for (int i = 0; i < m; ++i)
      if (manifold.eigenvalue_spectrum[i] < 0.0) negative -= manifold.eigenvalue_spectrum[i];
    manifold.negative_mass = negative / total;
  }
  return manifold;
}

AlignedManifold align_manifold(const ModelManifold& manifold, const Matrix& reference) {
  ProcrustesResult fit = procrustes_align(manifold.coordinates, reference);
  Matrix centered = manifold.coordinates.rowwise() - manifold.coordinates.colwise().mean();
  AlignedManifold out;
  out.coordinates = centered * fit.rotation;
  out.residual = fit.residual;
  return out;
}

int triangle_violations(const ModelDistanceMatrix& dist, double tol) {
  dist.validate();
  const int m = dist.n_models;
  int count = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        if (l == i || l == j) continue;
        if (dist.values(i, j) > dist.values(i, l) + dist.values(l, j) + tol) ++count;
      }
  return count;
}

}  // namespace dk
