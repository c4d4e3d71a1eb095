#pragma once

#include <string>
#include <vector>

#include "dk/spectral.hpp"
#include "dk/types.hpp"

namespace dk {

// Pairwise spectral-norm distances between the aligned embeddings of M
// models' kernels over one corpus.
struct ModelDistanceMatrix {
  int n_models = 0;
  Matrix values;  // M x M, symmetric, zero diagonal, nonnegative
  std::vector<std::string> model_labels;
  int dim = 0;             // shared embedding dimension used for every pair
  bool normalized = false;  // raw norm vs ratio to the smaller embedding norm

  void validate() const;
};

// Classical-MDS coordinates of the models.
struct ModelManifold {
  Matrix coordinates;          // M x d_out, column-centered
  Vector eigenvalue_spectrum;  // all M MDS eigenvalues, descending, signed
  double negative_mass = 0.0;  // sum |negative eigenvalues| / sum |eigenvalues|
};

struct AlignedManifold {
  Matrix coordinates;  // centered, rotated onto the centered reference
  double residual = 0.0;
};

struct ManifoldOptions {
  int dim = 0;  // shared embedding dimension; 0 = scree elbow of kernels[0]
  bool normalized = false;
  EigOptions eig;
};

// For every unordered pair: joint omnibus embedding, then
// D = ||Z_first - Z_second||_S, optionally divided by
// min(||Z_first||_S, ||Z_second||_S). Pairs run in parallel. All kernels
// must share node count and id order.
ModelDistanceMatrix pairwise_distances(const std::vector<DataKernel>& kernels,
                                       const ManifoldOptions& opts = {});

// Double-centers the squared distances (B = -1/2 J D∘D J), eigendecomposes,
// and scales the top-d_out eigenvectors by sqrt(max(lambda, 0)). Negative
// eigenvalues never enter the coordinates; their share is reported as
// negative_mass.
ModelManifold classical_mds(const ModelDistanceMatrix& dist, int d_out);

// Orthogonal Procrustes of the manifold onto a reference configuration of
// the same shape (both centered first; reflections allowed).
AlignedManifold align_manifold(const ModelManifold& manifold, const Matrix& reference);

// Number of ordered triples (i, j, l) with D(i,j) > D(i,l) + D(l,j) + tol.
// D is a dissimilarity, not necessarily a metric; violations are reported,
// never repaired.
int triangle_violations(const ModelDistanceMatrix& dist, double tol = 1e-12);

}  // namespace dk
