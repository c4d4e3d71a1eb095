#pragma once

// Hand-rolled reference implementations used as independent oracles. They
// deliberately avoid the library's code paths (and Eigen) so that a shared
// bug cannot cancel out of both sides of a comparison.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// --- dot products -----------------------------------------------------------

// Gram matrix by explicit scalar loops.
inline Dense gram(const Dense& rows) {
  const std::size_t n = rows.size();
  Dense out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < rows[i].size(); ++c) dot += rows[i][c] * rows[j][c];
      out[i][j] = dot;
    }
  return out;
}

// Euclidean distance matrix of a point set, by explicit loops.
inline Dense distance_matrix(const Dense& points) {
  const std::size_t n = points.size();
  Dense out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double ss = 0.0;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        const double diff = points[i][c] - points[j][c];
        ss += diff * diff;
      }
      out[i][j] = std::sqrt(ss);
    }
  return out;
}

// --- top-k selection ---------------------------------------------------------

// Neighbor lists via a full sort per row: k largest off-diagonal entries,
// ties broken toward the lower column index. Returned lists are sorted by
// column index for set comparison.
inline std::vector<std::vector<int>> top_k_sorted(const Dense& sim, int k) {
  const int n = static_cast<int>(sim.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> entries;
    for (int j = 0; j < n; ++j)
      if (j != i) entries.emplace_back(sim[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], j);
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (int r = 0; r < k; ++r) out[static_cast<std::size_t>(i)].push_back(entries[static_cast<std::size_t>(r)].second);
    std::sort(out[static_cast<std::size_t>(i)].begin(), out[static_cast<std::size_t>(i)].end());
  }
  return out;
}

// --- symmetric eigendecomposition (cyclic Jacobi) ----------------------------

struct JacobiEig {
  std::vector<double> values;  // sorted by descending |value|, positive first on ties
  Dense vectors;               // vectors[j] is the eigenvector of values[j]
};

inline JacobiEig jacobi_eig(Dense a) {
  const std::size_t n = a.size();
  Dense v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
  const double stop = 1e-14 * std::max(scale, 1.0);

  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(a[i][j]));
    if (off <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= stop * 1e-2) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {  // A <- A J (columns p, q)
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (std::size_t col = 0; col < n; ++col) {  // A <- J^T A (rows p, q)
          const double apc = a[p][col], aqc = a[q][col];
          a[p][col] = c * apc - s * aqc;
          a[q][col] = s * apc + c * aqc;
        }
        for (std::size_t r = 0; r < n; ++r) {  // V <- V J
          const double vrp = v[r][p], vrq = v[r][q];
          v[r][p] = c * vrp - s * vrq;
          v[r][q] = s * vrp + c * vrq;
        }
      }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](int x, int y) {
    const double mx = std::abs(a[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)]);
    const double my = std::abs(a[static_cast<std::size_t>(y)][static_cast<std::size_t>(y)]);
    if (mx != my) return mx > my;
    return a[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] >
           a[static_cast<std::size_t>(y)][static_cast<std::size_t>(y)];
  });

  JacobiEig out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (int idx : order) {
    const auto j = static_cast<std::size_t>(idx);
    out.values.push_back(a[j][j]);
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = v[r][j];
    out.vectors.push_back(std::move(column));
  }
  return out;
}

// --- p-values ----------------------------------------------------------------

// (1 + #{null >= observed}) / (B + 1) via an explicit counting loop.
inline double p_value_counting(const std::vector<double>& null_column, double observed) {
  int count = 0;
  for (double v : null_column)
    if (v >= observed) ++count;
  return (1.0 + static_cast<double>(count)) / (static_cast<double>(null_column.size()) + 1.0);
}

// --- profile-likelihood elbow -------------------------------------------------

// Exhaustive split-point scan of the two-segment Gaussian profile
// log-likelihood over a descending scree.
inline int likelihood_elbow(const std::vector<double>& scree, int max_d) {
  const int n = static_cast<int>(scree.size());
  if (n <= 1) return 1;
  const double floor_scale = std::max(1.0, scree[0] * scree[0]);
  int best_q = 1;
  double best = -1e300;
  for (int q = 1; q < n; ++q) {
    double mu1 = 0.0, mu2 = 0.0;
    for (int i = 0; i < q; ++i) mu1 += scree[static_cast<std::size_t>(i)];
    for (int i = q; i < n; ++i) mu2 += scree[static_cast<std::size_t>(i)];
    mu1 /= q;
    mu2 /= (n - q);
    double ss = 0.0;
    for (int i = 0; i < q; ++i) {
      const double dlt = scree[static_cast<std::size_t>(i)] - mu1;
      ss += dlt * dlt;
    }
    for (int i = q; i < n; ++i) {
      const double dlt = scree[static_cast<std::size_t>(i)] - mu2;
      ss += dlt * dlt;
    }
    const double sigma2 = std::max(ss / n, 1e-12 * floor_scale);
    const double ll = -0.5 * n * (std::log(2.0 * M_PI * sigma2) + ss / (n * sigma2));
    if (ll > best) {
      best = ll;
      best_q = q;
    }
  }
  return std::clamp(best_q, 1, std::max(1, max_d));
}

}  // namespace oracle
