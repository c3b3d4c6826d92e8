#ifndef CGR_AFFINE_IFS_HPP
#define CGR_AFFINE_IFS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/orbit.hpp"
#include "cgr/splitmix64.hpp"

namespace cgr {

/// One planar affine map w(x, y) = (a·x + b·y + e, c·x + d·y + f) with
/// selection probability p. Field order mirrors the table layout used in
/// IFS files: a b c d e f p.
struct AffineMap2D {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double e = 0.0, f = 0.0;
  double p = 0.0;
};

inline Point2 affine_apply(const AffineMap2D& m, Point2 pt) {
  return {m.a * pt.x + m.b * pt.y + m.e, m.c * pt.x + m.d * pt.y + m.f};
}

/// Column-wise polar form of the linear part:
///   A = [ r1·cosθ1  −r2·sinθ2 ]
///       [ r1·sinθ1   r2·cosθ2 ]
struct PolarForm {
  double r1 = 0.0, theta1 = 0.0;
  double r2 = 0.0, theta2 = 0.0;
};

inline PolarForm polar_decompose(double a, double b, double c, double d) {
  PolarForm pf;
  pf.r1 = std::hypot(a, c);
  pf.theta1 = (pf.r1 == 0.0) ? 0.0 : std::atan2(c, a);
  pf.r2 = std::hypot(b, d);
  // Second column is (−r2·sinθ2, r2·cosθ2), so θ2 = atan2(−b, d).
  pf.theta2 = (pf.r2 == 0.0) ? 0.0 : std::atan2(-b, d);
  return pf;
}

/// Rebuilds the 2x2 linear part; returns {a, b, c, d}.
inline std::array<double, 4> polar_reconstruct(const PolarForm& pf) {
  return {pf.r1 * std::cos(pf.theta1), -pf.r2 * std::sin(pf.theta2),
          pf.r1 * std::sin(pf.theta1), pf.r2 * std::cos(pf.theta2)};
}

struct IfsSystem {
  std::vector<AffineMap2D> maps;

  /// True when every map shrinks distances (operator norm < 1). Systems
  /// that fail this are still usable; callers may surface the flag.
  bool all_contractive() const {
    for (const AffineMap2D& m : maps) {
      // Largest singular value of [a b; c d].
      double q = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
      double det = m.a * m.d - m.b * m.c;
      double s = std::sqrt(std::max(0.0, q * q - 4.0 * det * det));
      double sigma_max = std::sqrt((q + s) / 2.0);
      if (!(sigma_max < 1.0)) return false;
    }
    return true;
  }

  void validate() const {
    if (maps.empty()) throw ContractError("IFS system has no maps");
    double sum = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const AffineMap2D& m = maps[i];
      if (!(m.p >= 0.0 && m.p <= 1.0))
        throw ContractError("IFS map " + std::to_string(i + 1) +
                            ": probability must lie in [0, 1]");
      sum += m.p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw ContractError("IFS probabilities must sum to 1 (got " +
                          std::to_string(sum) + ")");
  }
};

/// Parses an IFS table: one map per line, seven whitespace-separated
/// fields (a b c d e f p). '#' starts a comment; blank lines are skipped.
/// Errors carry 1-based line numbers.
inline IfsSystem parse_ifs_table(std::istream& is) {
  IfsSystem sys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    AffineMap2D m;
    if (!(fields >> m.a)) continue;  // blank or comment-only line
    if (!(fields >> m.b >> m.c >> m.d >> m.e >> m.f >> m.p))
      throw ParseError("IFS table line " + std::to_string(lineno) +
                       ": expected 7 numeric fields (a b c d e f p)");
    std::string extra;
    if (fields >> extra)
      throw ParseError("IFS table line " + std::to_string(lineno) +
                       ": trailing junk '" + extra + "'");
    sys.maps.push_back(m);
  }
  if (sys.maps.empty()) throw ParseError("IFS table contains no maps");
  sys.validate();
  return sys;
}

inline IfsSystem parse_ifs_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open IFS table " + path);
  return parse_ifs_table(is);
}

/// Random-iteration orbit: at each step draw u uniform in [0,1) and apply
/// the first map whose cumulative probability exceeds u. Deterministic for
/// a fixed (system, n, seed, start).
inline Orbit ifs_iterate(const IfsSystem& sys, std::size_t n,
                         std::uint64_t seed, Point2 start = {0.0, 0.0},
                         std::size_t burn_in = 20) {
  sys.validate();
  if (n == 0) throw ContractError("ifs_iterate: n must be at least 1");

  std::vector<double> cumulative(sys.maps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    acc += sys.maps[i].p;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;  // guard against rounding in the running sum

  Orbit orbit;
  orbit.start = start;
  orbit.burn_in = burn_in;
  orbit.points.reserve(n);
  orbit.points.push_back(start);

  SplitMix64 rng(seed);
  Point2 p = start;
  for (std::size_t i = 1; i < n; ++i) {
    double u = rng.next_double();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    p = affine_apply(sys.maps[k], p);
    orbit.points.push_back(p);
  }
  return orbit;
}

}  // namespace cgr

#endif  // CGR_AFFINE_IFS_HPP
