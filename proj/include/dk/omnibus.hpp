#pragma once

#include "dk/spectral.hpp"
#include "dk/types.hpp"

namespace dk {

// Jointly aligned latent-position estimates of two graphs on one corpus,
// obtained by splitting the ASE of their omnibus matrix.
struct OmnibusResult {
  LatentPositions z_first;   // rows 1..N of the omnibus embedding
  LatentPositions z_second;  // rows N+1..2N
  int dim = 0;
  Vector eigenvalues;  // retained omnibus spectrum, descending |lambda|
};

// [[A1, (A1+A2)/2], [(A1+A2)/2, A2]]. Inputs must be same-shape square
// hollow matrices; the off-diagonal blocks carry 0.5 where the graphs
// disagree.
SparseMatrix omnibus_matrix(const SparseMatrix& a1, const SparseMatrix& a2);
Matrix omnibus_matrix(const Matrix& a1, const Matrix& a2);

// ASE of the omnibus matrix in d dimensions, split into its two row halves.
OmnibusResult joint_embed(const SparseMatrix& a1, const SparseMatrix& a2, int d,
                          const EigOptions& opts = {});
OmnibusResult joint_embed(const Matrix& a1, const Matrix& a2, int d,
                          const EigOptions& opts = {});

// Row-wise Euclidean distances ||z_first[i] - z_second[i]||_2.
Vector per_datum_distances(const OmnibusResult& r);

}  // namespace dk
