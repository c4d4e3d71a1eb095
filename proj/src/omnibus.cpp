#include "dk/omnibus.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dk/error.hpp"

namespace dk {

namespace {

template <typename MatrixType>
void check_pair(const MatrixType& a1, const MatrixType& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols())
    throw InputError("omnibus_matrix: inputs must be square", ErrorCode::ShapeMismatch);
  if (a1.rows() != a2.rows())
    throw InputError("omnibus_matrix: inputs must have equal shape (" +
                         std::to_string(a1.rows()) + " vs " + std::to_string(a2.rows()) + ")",
                     ErrorCode::ShapeMismatch);
  for (Index i = 0; i < a1.rows(); ++i)
    if (std::abs(a1.coeff(i, i)) > 1e-12 || std::abs(a2.coeff(i, i)) > 1e-12)
      throw InputError("omnibus_matrix: inputs must be hollow (zero diagonal)");
}

void append_block(std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& m,
                  Index row_off, Index col_off) {
  for (Index outer = 0; outer < m.outerSize(); ++outer)
    for (SparseMatrix::InnerIterator it(m, outer); it; ++it)
      out.emplace_back(it.row() + row_off, it.col() + col_off, it.value());
}

template <typename MatrixType>
OmnibusResult joint_embed_impl(const MatrixType& a1, const MatrixType& a2, int d,
                               const EigOptions& opts) {
  const Index n = a1.rows();
  auto omni = omnibus_matrix(a1, a2);
  SpectralDecomposition eig = truncated_eig_symmetric(omni, d, opts);

  OmnibusResult out;
  out.dim = d;
  out.eigenvalues = eig.eigenvalues;
  LatentPositions z = latent_from_decomposition(std::move(eig));
  out.z_first.values = z.values.topRows(n);
  out.z_first.source = "omnibus:first";
  out.z_second.values = z.values.bottomRows(n);
  out.z_second.source = "omnibus:second";
  return out;
}

}  // namespace

SparseMatrix omnibus_matrix(const SparseMatrix& a1, const SparseMatrix& a2) {
  check_pair(a1, a2);
  const Index n = a1.rows();
  SparseMatrix avg = ((a1 + a2) * 0.5).pruned();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(a1.nonZeros() + a2.nonZeros() + 2 * avg.nonZeros()));
  append_block(triplets, a1, 0, 0);
  append_block(triplets, avg, 0, n);
  append_block(triplets, avg, n, 0);
  append_block(triplets, a2, n, n);

  SparseMatrix omni(2 * n, 2 * n);
  omni.setFromTriplets(triplets.begin(), triplets.end());
  omni.makeCompressed();
  return omni;
}

Matrix omnibus_matrix(const Matrix& a1, const Matrix& a2) {
  check_pair(a1, a2);
  const Index n = a1.rows();
  Matrix omni(2 * n, 2 * n);
  omni.topLeftCorner(n, n) = a1;
  omni.bottomRightCorner(n, n) = a2;
  omni.topRightCorner(n, n) = 0.5 * (a1 + a2);
  omni.bottomLeftCorner(n, n) = omni.topRightCorner(n, n);
  return omni;
}

OmnibusResult joint_embed(const SparseMatrix& a1, const SparseMatrix& a2, int d,
                          const EigOptions& opts) {
  return joint_embed_impl(a1, a2, d, opts);
}

OmnibusResult joint_embed(const Matrix& a1, const Matrix& a2, int d, const EigOptions& opts) {
  return joint_embed_impl(a1, a2, d, opts);
}

Vector per_datum_distances(const OmnibusResult& r) {
  if (r.z_first.values.rows() != r.z_second.values.rows() ||
      r.z_first.values.cols() != r.z_second.values.cols())
    throw InputError("per_datum_distances: halves have different shapes",
                     ErrorCode::ShapeMismatch);
  return (r.z_first.values - r.z_second.values).rowwise().norm();
}

}  // namespace dk
