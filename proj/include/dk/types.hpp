#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <vector>

namespace dk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

// How a directed top-k graph is turned into an undirected one.
//   Max:          union with the transpose; every node keeps its k out-neighbors.
//   AvgThreshold: mutual-neighbor intersection; only reciprocated edges survive.
enum class Symmetrization { Max, AvgThreshold };

std::string to_string(Symmetrization rule);
Symmetrization symmetrization_from_string(const std::string& name);

// One model's embeddings of a fixed corpus. Row i is the embedding of the
// datum with identifier ids[i]; the id order defines row order everywhere
// downstream.
struct EmbeddingMatrix {
  Matrix values;
  std::vector<std::string> ids;

  Index n_rows() const { return values.rows(); }
  Index n_cols() const { return values.cols(); }

  // Throws InputError unless: n_rows >= 2, n_cols >= 1, all values finite,
  // ids unique and matching the row count.
  void validate() const;
};

// Hollow symmetric 0/1 adjacency of a k-NN graph.
struct DataKernel {
  SparseMatrix adjacency;  // compressed, entries exactly 1.0
  int k = 0;
  Symmetrization rule = Symmetrization::Max;
  std::vector<std::string> ids;

  Index n_nodes() const { return adjacency.rows(); }
  void validate() const;
};

// Estimated RDPG latent positions, columns ordered by descending |eigenvalue|
// of the source matrix.
struct LatentPositions {
  Matrix values;
  std::string source;

  Index n_rows() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

struct SpectralDecomposition {
  Vector eigenvalues;   // descending |lambda|
  Matrix eigenvectors;  // n x d, orthonormal columns
};

// Checks that every entry is finite; throws InputError otherwise.
void require_finite(const Matrix& m, const std::string& what);
void require_finite(const Vector& v, const std::string& what);

}  // namespace dk
