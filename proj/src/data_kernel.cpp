#include "dk/data_kernel.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "dk/error.hpp"
#include "dk/parallel.hpp"

namespace dk {

namespace {

// Indices of the k largest entries of row, skipping `self`, ties broken by
// ascending column index. Returned sorted by the same (value desc, index asc)
// order.
std::vector<Index> row_top_k(const double* row, Index n, Index self, int k) {
  std::vector<Index> idx;
  idx.reserve(n - 1);
  for (Index j = 0; j < n; ++j)
    if (j != self) idx.push_back(j);
  auto better = [row](Index a, Index b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  };
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), better);
  idx.resize(k);
  return idx;
}

void check_k(int k, Index n) {
  if (k < 1 || k > n - 1)
    throw ConfigError("k must be in [1, N-1], got k=" + std::to_string(k) +
                      " with N=" + std::to_string(n));
}

DataKernel symmetrize(std::vector<std::vector<Index>> out_neighbors, int k,
                      Symmetrization rule, std::vector<std::string> ids) {
  const Index n = static_cast<Index>(out_neighbors.size());

  // Membership lookup for the mutual test.
  std::vector<std::vector<Index>> sorted = out_neighbors;
  for (auto& nbrs : sorted) std::sort(nbrs.begin(), nbrs.end());
  auto has_edge = [&sorted](Index i, Index j) {
    return std::binary_search(sorted[i].begin(), sorted[i].end(), j);
  };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * k * 2);
  for (Index i = 0; i < n; ++i) {
    for (Index j : sorted[i]) {
      if (j < i) continue;  // handle each unordered pair once, from its low end
      bool keep;
      if (rule == Symmetrization::Max) {
        keep = true;  // union with transpose
      } else {
        keep = has_edge(j, i);  // only mutual neighbors survive
      }
      if (keep) {
        triplets.emplace_back(i, j, 1.0);
        triplets.emplace_back(j, i, 1.0);
      }
    }
    // Max rule: pull in edges whose only direction is j -> i with j < i.
    if (rule == Symmetrization::Max) {
      for (Index j : sorted[i]) {
        if (j >= i) break;
        if (!has_edge(j, i)) {
          triplets.emplace_back(i, j, 1.0);
          triplets.emplace_back(j, i, 1.0);
        }
      }
    }
  }

  DataKernel kernel;
  kernel.adjacency.resize(n, n);
  kernel.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  kernel.adjacency.makeCompressed();
  kernel.k = k;
  kernel.rule = rule;
  kernel.ids = std::move(ids);
  return kernel;
}

}  // namespace

Matrix similarity_matrix(const EmbeddingMatrix& emb) {
  emb.validate();
  return emb.values * emb.values.transpose();
}

SparseMatrix top_k_directed(const Matrix& sim, int k) {
  const Index n = sim.rows();
  if (sim.cols() != n) throw InputError("similarity matrix must be square", ErrorCode::ShapeMismatch);
  check_k(k, n);

  std::vector<Eigen::Triplet<double>> triplets(static_cast<std::size_t>(n) * k);
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t i) {
    // Row copy keeps the selection cache-friendly for column-major input.
    Eigen::RowVectorXd row = sim.row(static_cast<Index>(i));
    auto nbrs = row_top_k(row.data(), n, static_cast<Index>(i), k);
    for (int j = 0; j < k; ++j)
      triplets[i * k + j] = Eigen::Triplet<double>(static_cast<Index>(i), nbrs[j], 1.0);
  });

  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

DataKernel build_data_kernel(const EmbeddingMatrix& emb, int k, Symmetrization rule) {
  emb.validate();
  const Index n = emb.n_rows();
  check_k(k, n);

  // Tile the Gram product so at most ~32 MB of similarities exist at a time.
  constexpr Index kTileBudget = 4'000'000;  // doubles
  const Index rows_per_tile = std::clamp<Index>(kTileBudget / n, 1, n);
  const Index n_tiles = (n + rows_per_tile - 1) / rows_per_tile;

  std::vector<std::vector<Index>> out_neighbors(n);
  parallel_for(0, static_cast<std::size_t>(n_tiles), [&](std::size_t t) {
    const Index r0 = static_cast<Index>(t) * rows_per_tile;
    const Index nb = std::min(rows_per_tile, n - r0);
    Matrix tile = emb.values.middleRows(r0, nb) * emb.values.transpose();
    for (Index r = 0; r < nb; ++r) {
      Eigen::RowVectorXd row = tile.row(r);
      out_neighbors[r0 + r] = row_top_k(row.data(), n, r0 + r, k);
    }
  });

  return symmetrize(std::move(out_neighbors), k, rule, emb.ids);
}

EmbeddingMatrix normalize_rows(EmbeddingMatrix emb) {
  emb.validate();
  for (Index i = 0; i < emb.n_rows(); ++i) {
    const double norm = emb.values.row(i).norm();
    if (norm == 0.0)
      throw InputError("cannot L2-normalize zero embedding row " + std::to_string(i) +
                       " (id " + emb.ids[i] + ")");
    emb.values.row(i) /= norm;
  }
  return emb;
}

}  // namespace dk
