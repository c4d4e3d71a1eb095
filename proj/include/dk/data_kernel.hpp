#pragma once

#include "dk/types.hpp"

namespace dk {

// Gram matrix S = Y Y^T of the embedding rows. Materializes the full N x N
// matrix; build_data_kernel uses a blocked path instead and never does.
Matrix similarity_matrix(const EmbeddingMatrix& emb);

// Directed k-NN adjacency: row i marks the k largest off-diagonal entries of
// sim row i. Ties break toward the lower column index.
SparseMatrix top_k_directed(const Matrix& sim, int k);

// similarity -> row-wise top-k -> symmetrize. The Gram product is computed
// tile-by-tile so only k neighbors per row are ever retained.
DataKernel build_data_kernel(const EmbeddingMatrix& emb, int k,
                             Symmetrization rule = Symmetrization::Max);

// Row L2-normalization (turns the dot-product kernel into a cosine kernel).
// A zero row cannot be normalized and is an input error.
EmbeddingMatrix normalize_rows(EmbeddingMatrix emb);

}  // namespace dk
