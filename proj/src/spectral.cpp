#include "dk/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "dk/error.hpp"
#include "dk/rng.hpp"

namespace dk {

namespace {

constexpr double kAsymmetryTol = 1e-10;

using MatVec = std::function<void(const Vector&, Vector&)>;

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols())
    throw InputError("matrix must be square", ErrorCode::ShapeMismatch);
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTol)
    throw InputError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

void check_symmetric(const SparseMatrix& m) {
  if (m.rows() != m.cols())
    throw InputError("matrix must be square", ErrorCode::ShapeMismatch);
  SparseMatrix diff = SparseMatrix(m.transpose()) - m;
  if (diff.coeffs().size() > 0 && diff.coeffs().abs().maxCoeff() > kAsymmetryTol)
    throw InputError("matrix is not symmetric");
}

void check_d(int d, Index n) {
  if (d < 1 || static_cast<Index>(d) > n)
    throw ConfigError("eigenpair count d must be in [1, N], got d=" + std::to_string(d) +
                      " with N=" + std::to_string(n));
}

// Order by descending |lambda|; among equal magnitudes the positive one first.
std::vector<int> magnitude_order(const Vector& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&values](int a, int b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a] > values[b];
  });
  return order;
}

SpectralDecomposition dense_eig(const Matrix& m, int d) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("dense symmetric eigendecomposition failed");
  const auto order = magnitude_order(solver.eigenvalues());

  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(m.rows(), d);
  for (int i = 0; i < d; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()[order[i]];
    out.eigenvectors.col(i) = solver.eigenvectors().col(order[i]);
  }
  return out;
}

// Deterministic pseudo-random unit vector; `attempt` distinguishes restart
// directions after a Krylov breakdown.
Vector start_vector(Index n, std::uint64_t attempt) {
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = 2.0 * uniform01(mix_key(0x9d4efabced00ULL, attempt, static_cast<std::uint64_t>(i))) - 1.0;
  const double norm = v.norm();
  return v / norm;
}

// Lanczos with full reorthogonalization. Grows one Krylov basis (restarting
// direction only on breakdown) until the top-d Ritz pairs by |theta| have
// residual |beta_m * s_m,i| <= tol * ||M||_S, with ||M||_S estimated by the
// largest Ritz magnitude seen so far.
SpectralDecomposition lanczos_eig(const MatVec& apply, Index n, int d, const EigOptions& opts) {
  const Index max_basis = std::min(n, std::max<Index>(opts.max_basis, d + 2));
  std::vector<Vector> basis;
  basis.reserve(max_basis);
  std::vector<double> alpha, beta;  // beta[j] couples basis[j] and basis[j+1]

  std::uint64_t attempt = 0;
  Vector v = start_vector(n, attempt++);
  basis.push_back(v);

  Vector w(n);
  Matrix ritz_vectors;
  Vector ritz_values;
  Vector ritz_residuals;

  // edge_beta is the not-yet-appended coupling ||w|| at the current step; the
  // classic Ritz residual bound is |edge_beta * s(m-1, i)|.
  auto solve_tridiagonal = [&](Index m, double edge_beta) {
    Matrix t = Matrix::Zero(m, m);
    for (Index j = 0; j < m; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(t);
    const auto order = magnitude_order(solver.eigenvalues());
    const int keep = std::min<int>(d, static_cast<int>(m));
    ritz_values.resize(keep);
    ritz_residuals.resize(keep);
    Matrix s(m, keep);
    for (int i = 0; i < keep; ++i) {
      ritz_values[i] = solver.eigenvalues()[order[i]];
      s.col(i) = solver.eigenvectors().col(order[i]);
      ritz_residuals[i] = std::abs(edge_beta * s(m - 1, i));
    }
    ritz_vectors = std::move(s);
  };

  auto converged = [&]() {
    if (ritz_values.size() < d) return false;
    const double scale = std::max(ritz_values.cwiseAbs().maxCoeff(),
                                  std::numeric_limits<double>::min());
    for (int i = 0; i < d; ++i)
      if (ritz_residuals[i] > opts.tol * scale) return false;
    return true;
  };

  const int check_every = 8;
  Index iterations = 0;
  for (;;) {
    const Index j = static_cast<Index>(basis.size()) - 1;
    apply(basis[j], w);
    const double a = basis[j].dot(w);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // Two reorthogonalization passes keep the basis orthonormal to machine
    // precision even for clustered spectra.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;

    double b = w.norm();
    ++iterations;

    const Index m = static_cast<Index>(basis.size());
    const double breakdown = 1e-13 * std::max(1.0, std::abs(a));
    const bool basis_full = m >= max_basis;
    const bool time_to_check =
        (m >= d + 2 && m % check_every == 0) || basis_full || b <= breakdown;

    if (time_to_check) {
      solve_tridiagonal(m, b);
      if (converged()) break;
    }

    if (b <= breakdown) {
      // Krylov space exhausted: the pairs found so far are (numerically)
      // exact on this invariant subspace. If more are needed, continue in
      // the orthogonal complement; otherwise accept what we have.
      if (m >= n) break;
      Vector fresh = start_vector(n, attempt++);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) fresh -= q.dot(fresh) * q;
      const double fn = fresh.norm();
      if (fn < 1e-10) break;
      beta.push_back(0.0);
      basis.push_back(fresh / fn);
      continue;
    }

    if (basis_full)
      throw NumericalError("Lanczos did not converge within basis limit " +
                               std::to_string(max_basis),
                           iterations);

    beta.push_back(b);
    basis.push_back(w / b);
  }

  const Index m = static_cast<Index>(basis.size());
  const int keep = static_cast<int>(ritz_values.size());
  if (keep < d)
    throw NumericalError("Lanczos produced only " + std::to_string(keep) + " of " +
                             std::to_string(d) + " requested eigenpairs",
                         iterations);

  SpectralDecomposition out;
  out.eigenvalues = ritz_values;
  out.eigenvectors = Matrix::Zero(n, d);
  for (Index j = 0; j < m; ++j)
    out.eigenvectors.noalias() += basis[j] * ritz_vectors.row(j).head(d);
  return out;
}

template <typename MatrixType>
SpectralDecomposition truncated_eig_impl(const MatrixType& m, int d, const EigOptions& opts) {
  check_symmetric(m);
  check_d(d, m.rows());
  if (m.rows() <= opts.dense_cutoff) {
    return dense_eig(Matrix(m), d);
  }
  MatVec apply = [&m](const Vector& x, Vector& y) { y.noalias() = m * x; };
  return lanczos_eig(apply, m.rows(), d, opts);
}

template <typename MatrixType>
void check_hollow(const MatrixType& a) {
  for (Index i = 0; i < a.rows(); ++i)
    if (std::abs(a.coeff(i, i)) > 1e-12)
      throw InputError("adjacency matrix must be hollow (zero diagonal)");
}

template <typename MatrixType>
LatentPositions ase_impl(const MatrixType& a, int d, const EigOptions& opts) {
  check_hollow(a);
  return latent_from_decomposition(truncated_eig_symmetric(a, d, opts));
}

}  // namespace

void canonicalize_signs(Matrix& eigenvectors) {
  for (Index c = 0; c < eigenvectors.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < eigenvectors.rows(); ++r) {
      const double mag = std::abs(eigenvectors(r, c));
      if (mag > best) {
        best = mag;
        arg = r;
      }
    }
    if (eigenvectors(arg, c) < 0.0) eigenvectors.col(c) = -eigenvectors.col(c);
  }
}

LatentPositions latent_from_decomposition(SpectralDecomposition eig) {
  canonicalize_signs(eig.eigenvectors);
  LatentPositions z;
  z.values = eig.eigenvectors * eig.eigenvalues.cwiseAbs().cwiseSqrt().asDiagonal();
  z.source = "ase(d=" + std::to_string(eig.eigenvalues.size()) + ")";
  return z;
}

SpectralDecomposition truncated_eig_symmetric(const Matrix& m, int d, const EigOptions& opts) {
  return truncated_eig_impl(m, d, opts);
}

SpectralDecomposition truncated_eig_symmetric(const SparseMatrix& m, int d,
                                              const EigOptions& opts) {
  return truncated_eig_impl(m, d, opts);
}

LatentPositions ase(const Matrix& a, int d, const EigOptions& opts) {
  return ase_impl(a, d, opts);
}

LatentPositions ase(const SparseMatrix& a, int d, const EigOptions& opts) {
  return ase_impl(a, d, opts);
}

int select_dimension(const Vector& abs_eigenvalues, int max_d) {
  const Index n = abs_eigenvalues.size();
  if (n == 0) throw InputError("select_dimension needs a nonempty scree");
  const int hi = std::max(1, max_d);
  if (n == 1) return 1;

  // Zhu-Ghodsi: split the scree into two Gaussian segments with pooled
  // variance and keep the split maximizing the profile log-likelihood.
  const double scale = std::max(1.0, abs_eigenvalues[0] * abs_eigenvalues[0]);
  int best_q = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (Index q = 1; q < n; ++q) {
    const double mu1 = abs_eigenvalues.head(q).mean();
    const double mu2 = abs_eigenvalues.tail(n - q).mean();
    const double ss = (abs_eigenvalues.head(q).array() - mu1).square().sum() +
                      (abs_eigenvalues.tail(n - q).array() - mu2).square().sum();
    const double sigma2 = std::max(ss / static_cast<double>(n), 1e-12 * scale);
    const double ll = -0.5 * static_cast<double>(n) *
                      (std::log(2.0 * M_PI * sigma2) + ss / (static_cast<double>(n) * sigma2));
    if (ll > best_ll) {
      best_ll = ll;
      best_q = static_cast<int>(q);
    }
  }
  return std::clamp(best_q, 1, hi);
}

int select_dimension(const SparseMatrix& a, int max_d, const EigOptions& opts) {
  const int scree_len = static_cast<int>(std::min<Index>(a.rows(), 30));
  SpectralDecomposition eig = truncated_eig_symmetric(a, scree_len, opts);
  return select_dimension(eig.eigenvalues.cwiseAbs(), max_d);
}

double spectral_norm(const Matrix& m) {
  require_finite(m, "spectral_norm input");
  if (m.size() == 0) return 0.0;
  const Index p = std::min(m.rows(), m.cols());

  if (p <= 256) {
    // Small inner dimension: largest eigenvalue of the p x p Gram matrix.
    Matrix gram = (m.rows() >= m.cols()) ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
  }
  if (std::max(m.rows(), m.cols()) <= 2000) {
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
  }

  // Power iteration on x -> M^T (M x).
  Vector x = start_vector(m.cols(), 0x5eedULL);
  double sigma = 0.0;
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = m * x;
    Vector z = m.transpose() * y;
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    const double next = std::sqrt(zn / std::max(x.norm(), 1e-300));
    x = z / zn;
    if (it > 0 && std::abs(next - sigma) <= 1e-9 * std::max(next, 1e-300)) return next;
    sigma = next;
  }
  throw NumericalError("spectral_norm power iteration did not converge", max_iter);
}

ProcrustesResult procrustes_align(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("procrustes_align: shape mismatch", ErrorCode::ShapeMismatch);
  require_finite(a, "procrustes_align A");
  require_finite(b, "procrustes_align B");

  Matrix ac = a.rowwise() - a.colwise().mean();
  Matrix bc = b.rowwise() - b.colwise().mean();
  Matrix cross = ac.transpose() * bc;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.residual = (ac * out.rotation - bc).norm();
  return out;
}

}  // namespace dk
