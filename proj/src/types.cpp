#include "dk/types.hpp"

#include <cmath>
#include <unordered_set>

#include "dk/error.hpp"

namespace dk {

std::string to_string(Symmetrization rule) {
  return rule == Symmetrization::Max ? "max" : "avg_threshold";
}

Symmetrization symmetrization_from_string(const std::string& name) {
  if (name == "max") return Symmetrization::Max;
  if (name == "avg" || name == "avg_threshold") return Symmetrization::AvgThreshold;
  throw ConfigError("unknown symmetrization rule: " + name);
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw InputError(what + " contains non-finite values", ErrorCode::NonFinite);
}

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw InputError(what + " contains non-finite values", ErrorCode::NonFinite);
}

void EmbeddingMatrix::validate() const {
  if (n_rows() < 2) throw InputError("embedding matrix needs at least 2 rows");
  if (n_cols() < 1) throw InputError("embedding matrix needs at least 1 column");
  require_finite(values, "embedding matrix");
  if (static_cast<Index>(ids.size()) != n_rows())
    throw InputError("id count does not match row count", ErrorCode::ShapeMismatch);
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second)
      throw InputError("duplicate datum id: " + id, ErrorCode::DuplicateId);
  }
}

void DataKernel::validate() const {
  const Index n = adjacency.rows();
  if (adjacency.cols() != n) throw InputError("adjacency must be square", ErrorCode::ShapeMismatch);
  if (static_cast<Index>(ids.size()) != n)
    throw InputError("kernel id count does not match node count", ErrorCode::ShapeMismatch);
  for (Index col = 0; col < adjacency.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(adjacency, col); it; ++it) {
      if (it.row() == it.col()) throw InputError("kernel has a self-loop");
      if (it.value() != 1.0) throw InputError("kernel entries must be 0 or 1");
    }
  }
  SparseMatrix diff = SparseMatrix(adjacency.transpose()) - adjacency;
  if (diff.coeffs().size() > 0 && diff.coeffs().abs().maxCoeff() != 0.0)
    throw InputError("kernel adjacency is not symmetric");
}

}  // namespace dk
