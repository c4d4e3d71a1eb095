#pragma once

#include "dk/types.hpp"

namespace dk {

struct EigOptions {
  // Matrices of order <= dense_cutoff go through the dense solver; larger
  // ones through Lanczos with full reorthogonalization. The accuracy contract
  // is identical either way.
  Index dense_cutoff = 512;
  // Lanczos basis cap before giving up.
  Index max_basis = 400;
  // Per-pair residual target, relative to the spectral norm: the returned
  // pairs satisfy ||M v - lambda v|| <= tol * ||M||_S.
  double tol = 1e-7;
};

// Top-d eigenpairs of a symmetric matrix by descending |lambda|.
// Ties in |lambda| order the positive eigenvalue first.
SpectralDecomposition truncated_eig_symmetric(const Matrix& m, int d,
                                              const EigOptions& opts = {});
SpectralDecomposition truncated_eig_symmetric(const SparseMatrix& m, int d,
                                              const EigOptions& opts = {});

// Adjacency spectral embedding: Z = U_d |Lambda_d|^{1/2} from the top-d
// eigenpairs by |lambda|. Each eigenvector column is sign-flipped so its
// largest-magnitude entry is positive, making the output deterministic.
LatentPositions ase(const Matrix& a, int d, const EigOptions& opts = {});
LatentPositions ase(const SparseMatrix& a, int d, const EigOptions& opts = {});

// The sign convention used by ase: flip each column so its largest-magnitude
// entry (lowest row index on ties) is positive.
void canonicalize_signs(Matrix& eigenvectors);

// Z = U_d |Lambda_d|^{1/2} from an already-computed decomposition, applying
// the same sign convention as ase.
LatentPositions latent_from_decomposition(SpectralDecomposition eig);

// Profile-likelihood elbow (two-segment Gaussian split with pooled variance)
// of a descending |lambda| scree, clamped to [1, max_d].
int select_dimension(const Vector& abs_eigenvalues, int max_d);

// Convenience: builds the scree from the top min(N, 30) |lambda| of a
// symmetric matrix, then applies the elbow rule above.
int select_dimension(const SparseMatrix& a, int max_d, const EigOptions& opts = {});

// Largest singular value, relative accuracy 1e-6 or better.
double spectral_norm(const Matrix& m);

struct ProcrustesResult {
  Matrix rotation;  // d x d orthogonal (reflections allowed)
  double residual;  // min over R of ||A_c R - B_c||_F
};

// Orthogonal Procrustes: centers both point sets, then solves
// argmin_R ||A_c R - B_c||_F over orthogonal R via the SVD of A_c^T B_c.
ProcrustesResult procrustes_align(const Matrix& a, const Matrix& b);

}  // namespace dk
