#ifndef CGR_MDS_EMBED_HPP
#define CGR_MDS_EMBED_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/similarity.hpp"

namespace cgr {

/// Low-dimensional coordinates recovered from a distance matrix.
/// Coordinates are centered; eigenvalues are the full descending spectrum
/// of the doubly centered Gram matrix, and negative_eigenvalue_ratio =
/// |lambda_min| / lambda_max flags how non-Euclidean the input was
/// (0 for perfectly Euclidean distances).
struct MdsEmbedding {
  std::size_t n = 0, k = 0;
  std::vector<double> coordinates;  // row-major n*k
  std::vector<double> eigenvalues;  // all n, descending
  std::vector<std::string> labels;
  double negative_eigenvalue_ratio = 0.0;

  double at(std::size_t row, std::size_t dim) const {
    return coordinates[row * k + dim];
  }
};

namespace detail {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n*n).
/// Rotations zero each off-diagonal entry in turn until all are below the
/// threshold. V accumulates eigenvectors as columns.
inline void jacobi_eigensymm(std::vector<double>& a, std::size_t n,
                             std::vector<double>& eigenvalues,
                             std::vector<double>& eigenvectors,
                             double threshold = 1e-12,
                             std::size_t max_sweeps = 100) {
  eigenvectors.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eigenvectors[i * n + i] = 1.0;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::fabs(apq) <= threshold / static_cast<double>(n * n)) continue;
        double app = a[p * n + p], aqq = a[q * n + q];
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          double aip = a[i * n + p], aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = a[p * n + i], aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = eigenvectors[i * n + p], viq = eigenvectors[i * n + q];
          eigenvectors[i * n + p] = c * vip - s * viq;
          eigenvectors[i * n + q] = s * vip + c * viq;
        }
      }
    }
  }

  eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
}

}  // namespace detail

/// Classical (Torgerson) MDS. Squares the distances, double-centers with
/// J = I - (1/n) 1 1^T into B = -1/2 J D2 J, eigendecomposes B, and keeps
/// the top k axes scaled by sqrt(max(lambda, 0)). Negative eigenvalues
/// (non-Euclidean input) contribute zero-length axes and are reported via
/// negative_eigenvalue_ratio. Each coordinate column is sign-fixed so its
/// largest-magnitude entry is positive.
inline MdsEmbedding classical_mds(const DistanceMatrix& dm, std::size_t k) {
  std::size_t n = dm.size;
  if (n < 2) throw ContractError("mds: need at least 2 points");
  if (k < 1 || k > n - 1)
    throw ContractError("mds: dimension k must satisfy 1 <= k <= n-1");
  for (std::size_t i = 0; i < n; ++i) {
    if (dm.at(i, i) != 0.0)
      throw ContractError("mds: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dm.at(i, j) != dm.at(j, i))
        throw ContractError("mds: matrix not symmetric at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      if (dm.at(i, j) < 0.0)
        throw ContractError("mds: negative distance at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
    }
  }

  // B = -1/2 J D2 J expands to -1/2 (d2_ij - rowmean_i - colmean_j + mean).
  std::vector<double> d2(n * n);
  for (std::size_t i = 0; i < n * n; ++i) d2[i] = dm.entries[i] * dm.entries[i];
  std::vector<double> row_mean(n, 0.0);
  double grand_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += d2[i * n + j];
    row_mean[i] /= static_cast<double>(n);
    grand_mean += row_mean[i];
  }
  grand_mean /= static_cast<double>(n);
  std::vector<double> b(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b[i * n + j] =
          -0.5 * (d2[i * n + j] - row_mean[i] - row_mean[j] + grand_mean);

  std::vector<double> eigenvalues, eigenvectors;
  detail::jacobi_eigensymm(b, n, eigenvalues, eigenvectors);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return eigenvalues[x] > eigenvalues[y];
  });

  MdsEmbedding emb;
  emb.n = n;
  emb.k = k;
  emb.labels = dm.labels;
  emb.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) emb.eigenvalues[i] = eigenvalues[order[i]];

  double lambda_max = emb.eigenvalues.front();
  double lambda_min = emb.eigenvalues.back();
  emb.negative_eigenvalue_ratio =
      (lambda_min < 0.0 && lambda_max > 0.0) ? -lambda_min / lambda_max : 0.0;

  emb.coordinates.assign(n * k, 0.0);
  for (std::size_t dim = 0; dim < k; ++dim) {
    std::size_t col = order[dim];
    double lambda = eigenvalues[col];
    double scale = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    // Sign convention: flip so the largest-magnitude component is positive.
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = eigenvectors[i * n + col];
      if (std::fabs(v) > std::fabs(best)) best = v;
    }
    double flip = best < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      emb.coordinates[i * k + dim] = flip * scale * eigenvectors[i * n + col];
  }
  return emb;
}

/// CSV rows: label, then one column per embedding dimension.
inline void write_embedding_csv(std::ostream& os, const MdsEmbedding& emb) {
  os << "label";
  for (std::size_t d = 0; d < emb.k; ++d) os << ",dim" << d;
  os << '\n';
  char buf[32];
  for (std::size_t i = 0; i < emb.n; ++i) {
    os << emb.labels[i];
    for (std::size_t d = 0; d < emb.k; ++d) {
      std::snprintf(buf, sizeof buf, "%.10g", emb.at(i, d));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace cgr

#endif  // CGR_MDS_EMBED_HPP
