#ifndef CGR_SIMILARITY_HPP
#define CGR_SIMILARITY_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/raster_image.hpp"

namespace cgr {

/// Exponents and stabilizers of the structural-similarity index. Defaults
/// use unit dynamic range with the standard K1=0.01, K2=0.03 constants and
/// C3 = C2/2, under which the three-factor product collapses to the
/// simplified two-factor form.
struct SsimParams {
  double alpha = 1.0, beta = 1.0, gamma = 1.0;
  double L = 1.0;
  double C1 = 1e-4;  // (0.01*L)^2
  double C2 = 9e-4;  // (0.03*L)^2
  double C3 = 4.5e-4;

  static SsimParams defaults() { return SsimParams{}; }

  void validate() const {
    if (!(C1 > 0.0) || !(C2 > 0.0) || !(C3 > 0.0))
      throw ContractError("ssim: stabilizer constants must be positive");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0))
      throw ContractError("ssim: exponents must be non-negative");
    if (!(L > 0.0)) throw ContractError("ssim: dynamic range must be positive");
  }
};

/// Whole-image first and second moments for a pair, computed in two
/// passes (means first, then centered sums) so sparse images do not lose
/// precision to cancellation. Variances are population-style (divide by N).
struct ImageMoments {
  double mu_x = 0.0, mu_y = 0.0;
  double sigma_x = 0.0, sigma_y = 0.0;
  double sigma_xy = 0.0;
};

namespace detail {

/// Raw pairwise statistics. var_* and cov divide by N (population form);
/// sd_product is sqrt(vxx*vyy)/N, the product of the two standard
/// deviations evaluated through a single square root so that x == y gives
/// sd_product == var_x bit-exactly (sqrt of a rounded square is exact).
struct PairStats {
  double mu_x = 0.0, mu_y = 0.0;
  double var_x = 0.0, var_y = 0.0;
  double cov = 0.0;
  double sd_product = 0.0;
};

inline PairStats pair_stats(const RasterImage& x, const RasterImage& y) {
  if (x.width != y.width || x.height != y.height)
    throw ContractError("ssim: image dimensions differ (" +
                        std::to_string(x.width) + "x" + std::to_string(x.height) +
                        " vs " + std::to_string(y.width) + "x" +
                        std::to_string(y.height) + ")");
  std::size_t n = x.pixels.size();
  if (n == 0) throw ContractError("ssim: empty image");

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x.pixels[i];
    sy += y.pixels[i];
  }
  PairStats st;
  double nd = static_cast<double>(n);
  st.mu_x = sx / nd;
  st.mu_y = sy / nd;

  double vxx = 0.0, vyy = 0.0, vxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x.pixels[i] - st.mu_x;
    double dy = y.pixels[i] - st.mu_y;
    vxx += dx * dx;
    vyy += dy * dy;
    vxy += dx * dy;
  }
  st.var_x = vxx / nd;
  st.var_y = vyy / nd;
  st.cov = vxy / nd;
  st.sd_product = std::sqrt(vxx * vyy) / nd;
  return st;
}

}  // namespace detail

inline ImageMoments image_moments(const RasterImage& x, const RasterImage& y) {
  detail::PairStats st = detail::pair_stats(x, y);
  ImageMoments m;
  m.mu_x = st.mu_x;
  m.mu_y = st.mu_y;
  m.sigma_x = std::sqrt(st.var_x);
  m.sigma_y = std::sqrt(st.var_y);
  m.sigma_xy = st.cov;
  return m;
}

/// Global SSIM: luminance, contrast and structure factors over whole-image
/// moments,
///   l = (2 mu_x mu_y + C1) / (mu_x^2 + mu_y^2 + C1)
///   c = (2 sigma_x sigma_y + C2) / (sigma_x^2 + sigma_y^2 + C2)
///   s = (sigma_xy + C3) / (sigma_x sigma_y + C3)
/// combined as l^alpha * c^beta * s^gamma. With default exponents the
/// result lies in [-1, 1], and identical images give exactly 1.
inline double ssim_global(const RasterImage& x, const RasterImage& y,
                          const SsimParams& params = SsimParams::defaults()) {
  params.validate();
  detail::PairStats st = detail::pair_stats(x, y);
  double l = (2.0 * st.mu_x * st.mu_y + params.C1) /
             (st.mu_x * st.mu_x + st.mu_y * st.mu_y + params.C1);
  double c = (2.0 * st.sd_product + params.C2) /
             (st.var_x + st.var_y + params.C2);
  double s = (st.cov + params.C3) / (st.sd_product + params.C3);
  auto powi = [](double base, double e) {
    return e == 1.0 ? base : std::pow(base, e);
  };
  return powi(l, params.alpha) * powi(c, params.beta) * powi(s, params.gamma);
}

/// Structural dissimilarity, 1 - SSIM; 0 for identical images, up to 2
/// for negatively correlated ones.
inline double dssim(const RasterImage& x, const RasterImage& y,
                    const SsimParams& params = SsimParams::defaults()) {
  return 1.0 - ssim_global(x, y, params);
}

struct DistanceMatrix {
  std::size_t size = 0;
  std::vector<double> entries;  // row-major size*size
  std::vector<std::string> labels;

  double& at(std::size_t i, std::size_t j) { return entries[i * size + j]; }
  double at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

/// Pairwise DSSIM matrix. Each unordered pair is evaluated once and
/// mirrored. `threads` > 1 distributes pairs over worker threads; the
/// result is identical to the sequential one (each entry is an
/// independent pure computation).
inline DistanceMatrix distance_matrix(
    const std::vector<RasterImage>& images,
    const SsimParams& params = SsimParams::defaults(),
    std::vector<std::string> labels = {}, std::size_t threads = 1) {
  std::size_t n = images.size();
  if (n < 2) throw ContractError("distance matrix: need at least 2 images");
  for (std::size_t i = 1; i < n; ++i)
    if (images[i].width != images[0].width ||
        images[i].height != images[0].height)
      throw ContractError("distance matrix: dimensions of images (0, " +
                          std::to_string(i) + ") differ");

  DistanceMatrix dm;
  dm.size = n;
  dm.entries.assign(n * n, 0.0);
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) dm.labels.push_back(std::to_string(i));
  else {
    if (labels.size() != n)
      throw ContractError("distance matrix: label count mismatch");
    dm.labels = std::move(labels);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < pairs.size(); k += step) {
      auto [i, j] = pairs[k];
      double d = dssim(images[i], images[j], params);
      dm.at(i, j) = d;
      dm.at(j, i) = d;
    }
  };

  if (threads <= 1 || pairs.size() <= 1) {
    work(0, 1);
  } else {
    std::size_t nt = std::min(threads, pairs.size());
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
    for (std::thread& th : pool) th.join();
  }
  return dm;
}

/// CSV with a label header row and a leading label column.
inline void write_distance_csv(std::ostream& os, const DistanceMatrix& dm) {
  os << "label";
  for (const std::string& l : dm.labels) os << ',' << l;
  os << '\n';
  char buf[32];
  for (std::size_t i = 0; i < dm.size; ++i) {
    os << dm.labels[i];
    for (std::size_t j = 0; j < dm.size; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", dm.at(i, j));
      os << ',' << buf;
    }
    os << '\n';
  }
}

/// JSON alternative: {"labels": [...], "rows": [[...], ...]}.
inline void write_distance_json(std::ostream& os, const DistanceMatrix& dm) {
  os << "{\n  \"labels\": [";
  for (std::size_t i = 0; i < dm.size; ++i)
    os << (i ? ", " : "") << '"' << dm.labels[i] << '"';
  os << "],\n  \"rows\": [\n";
  char buf[32];
  for (std::size_t i = 0; i < dm.size; ++i) {
    os << "    [";
    for (std::size_t j = 0; j < dm.size; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", dm.at(i, j));
      os << (j ? ", " : "") << buf;
    }
    os << (i + 1 < dm.size ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
}

}  // namespace cgr

#endif  // CGR_SIMILARITY_HPP
