#ifndef CGR_CHAOS_GAME_HPP
#define CGR_CHAOS_GAME_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/orbit.hpp"
#include "cgr/raster_image.hpp"
#include "cgr/sequence_sources.hpp"

namespace cgr {

/// Convex polygon whose vertices anchor the chaos game. Built-in layouts:
///   square_corners   (-1,-1),(-1,1),(1,1),(1,-1), clockwise from bottom-left
///   unit_square_dna  A=(0,0), C=(0,1), G=(1,1), T=(1,0)
///   unit_circle      vertex j at angle pi/2 + 2*pi*j/n, radius 1
struct PolygonSpec {
  std::string layout;
  std::vector<Point2> vertices;
  std::vector<std::string> labels;

  std::size_t n() const { return vertices.size(); }

  static PolygonSpec square_corners() {
    PolygonSpec p;
    p.layout = "square-corners";
    p.vertices = {{-1, -1}, {-1, 1}, {1, 1}, {1, -1}};
    p.labels = {"0", "1", "2", "3"};
    return p;
  }

  static PolygonSpec unit_square_dna() {
    PolygonSpec p;
    p.layout = "unit-square";
    p.vertices = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    p.labels = {"A", "C", "G", "T"};
    return p;
  }

  static PolygonSpec unit_circle(std::size_t n) {
    if (n < 3) throw ContractError("polygon needs at least 3 vertices");
    PolygonSpec p;
    p.layout = "unit-circle";
    for (std::size_t j = 0; j < n; ++j) {
      double theta = M_PI / 2.0 +
                     2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
      p.vertices.push_back({std::cos(theta), std::sin(theta)});
      p.labels.push_back(std::to_string(j));
    }
    return p;
  }

  static PolygonSpec custom(std::vector<Point2> vertices,
                            std::vector<std::string> labels = {}) {
    if (vertices.size() < 3)
      throw ContractError("polygon needs at least 3 vertices");
    PolygonSpec p;
    p.layout = "custom";
    p.vertices = std::move(vertices);
    if (labels.empty())
      for (std::size_t j = 0; j < p.vertices.size(); ++j)
        p.labels.push_back(std::to_string(j));
    else
      p.labels = std::move(labels);
    if (p.labels.size() != p.vertices.size())
      throw ContractError("polygon: label count must match vertex count");
    p.require_convex();
    return p;
  }

  Point2 centroid() const {
    Point2 c{0.0, 0.0};
    for (const Point2& v : vertices) {
      c.x += v.x;
      c.y += v.y;
    }
    c.x /= static_cast<double>(vertices.size());
    c.y /= static_cast<double>(vertices.size());
    return c;
  }

  /// Consecutive-edge cross products must share one strict sign.
  void require_convex() const {
    int sign = 0;
    std::size_t m = vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % m];
      const Point2& c = vertices[(i + 2) % m];
      double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
      if (cross == 0.0)
        throw ContractError("polygon: degenerate (collinear vertices)");
      int s = cross > 0.0 ? 1 : -1;
      if (sign == 0)
        sign = s;
      else if (s != sign)
        throw ContractError("polygon: vertices are not convex");
    }
  }

  /// Point-in-convex-hull test, boundary counts as inside. Tolerance
  /// absorbs rounding in centroid-style constructions.
  bool contains(Point2 p, double tol = 1e-12) const {
    std::size_t m = vertices.size();
    double orient = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % m];
      orient += (b.x - a.x) * (b.y + a.y);
    }
    double inward = orient > 0.0 ? -1.0 : 1.0;  // clockwise flips edge normals
    for (std::size_t i = 0; i < m; ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % m];
      double side = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (inward * side < -tol) return false;
    }
    return true;
  }
};

/// r = 1 / (1 + sin(pi/n)): the inscribed-gasket rate, increasing in n.
inline double dividing_rate_fiser(std::size_t n) {
  if (n < 3) throw ContractError("dividing rate: need n >= 3");
  return 1.0 / (1.0 + std::sin(M_PI / static_cast<double>(n)));
}

/// Almeida's packing rate with k = round((n+1)/4), half away from zero.
/// For n = 3, 4 the tangent in the second term blows up and its share
/// vanishes, giving r ~= 0.5 as published.
inline double dividing_rate_almeida(std::size_t n) {
  if (n < 3) throw ContractError("dividing rate: need n >= 3");
  double nn = static_cast<double>(n);
  double k = std::floor((nn + 1.0) / 4.0 + 0.5);
  double A = 2.0 * std::cos(M_PI * (0.5 - k / nn));
  double B = 2.0 * std::cos(M_PI * (0.5 - 1.0 / (2.0 * nn)));
  double C = std::cos((2.0 * k - 1.0) * M_PI / (2.0 * nn));
  double T1 = std::tan((2.0 * k - 1.0) * M_PI / (2.0 * nn));
  double T2 = std::tan(M_PI - (nn + 2.0 * k - 2.0) * (M_PI / (2.0 * nn)));
  return (A - B * C * (1.0 + T1 / T2)) / A;
}

struct ChaosGameConfig {
  PolygonSpec polygon;
  double r = 0.5;
  Point2 start;
  std::size_t burn_in = 20;

  void validate() const {
    if (polygon.n() < 3) throw ContractError("chaos game: polygon too small");
    if (!(r > 0.0 && r < 1.0))
      throw ContractError("chaos game: dividing rate must be strictly in (0, 1)");
    if (!polygon.contains(start))
      throw ContractError("chaos game: start point outside polygon hull");
  }
};

/// Config with the start at the polygon centroid and default burn-in.
inline ChaosGameConfig make_chaos_game_config(PolygonSpec polygon, double r,
                                              std::size_t burn_in = 20) {
  ChaosGameConfig cfg;
  cfg.start = polygon.centroid();
  cfg.polygon = std::move(polygon);
  cfg.r = r;
  cfg.burn_in = burn_in;
  cfg.validate();
  return cfg;
}

/// Chaos-game orbit: p0 = start, then p_m = (1-r)*p_{m-1} + r*v(s_m).
/// The orbit keeps every point; burn_in only tags how many leading points
/// downstream statistics skip.
inline Orbit cgr_orbit(const ChaosGameConfig& cfg, const SymbolSequence& seq) {
  cfg.validate();
  if (seq.symbols.empty()) throw ContractError("chaos game: empty sequence");
  std::size_t n = cfg.polygon.n();

  Orbit orbit;
  orbit.start = cfg.start;
  orbit.burn_in = cfg.burn_in;
  orbit.points.reserve(seq.symbols.size() + 1);
  orbit.points.push_back(cfg.start);

  Point2 p = cfg.start;
  double r = cfg.r;
  for (std::size_t i = 0; i < seq.symbols.size(); ++i) {
    std::uint32_t s = seq.symbols[i];
    if (s >= n)
      throw ContractError("chaos game: symbol " + std::to_string(s) +
                          " at position " + std::to_string(i + 1) +
                          " exceeds polygon vertex count " + std::to_string(n));
    const Point2& v = cfg.polygon.vertices[s];
    p = {(1.0 - r) * p.x + r * v.x, (1.0 - r) * p.y + r * v.y};
    orbit.points.push_back(p);
  }
  return orbit;
}

/// Trailing-symbol address of a point, most recent symbol first.
struct QuadrantAddress {
  std::vector<std::uint32_t> symbols;
};

/// Inverts the r = 0.5 DNA chaos game on the unit square: the quadrant
/// holding the point names the last symbol, then p -> 2p - v(s) rewinds
/// one step. Points on any sub-square boundary have no unique history.
inline QuadrantAddress quadrant_decode(Point2 p, std::size_t depth) {
  if (depth == 0) throw ContractError("quadrant decode: depth must be >= 1");
  static const Point2 kVertex[4] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  QuadrantAddress addr;
  addr.symbols.reserve(depth);
  for (std::size_t step = 0; step < depth; ++step) {
    if (!(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0))
      throw ContractError("quadrant decode: point outside the open unit square");
    if (p.x == 0.5 || p.y == 0.5)
      throw ContractError("quadrant decode: point on a sub-square boundary");
    std::uint32_t s;
    if (p.x < 0.5)
      s = p.y < 0.5 ? 0u : 1u;  // A : C
    else
      s = p.y < 0.5 ? 3u : 2u;  // T : G
    addr.symbols.push_back(s);
    const Point2& v = kVertex[s];
    p = {2.0 * p.x - v.x, 2.0 * p.y - v.y};
  }
  return addr;
}

/// Synthetic raster of the unit square at 4^depth sub-squares where every
/// cell whose history contains the dinucleotide CG (a C immediately
/// followed by a G) is blank. depth 2 blanks exactly one cell of 16.
inline RasterImage cg_suppressed_mask(std::size_t depth,
                                      std::size_t resolution) {
  if (depth < 2) throw ContractError("cg mask: depth must be at least 2");
  if (depth > 12) throw ContractError("cg mask: depth above 12 not supported");
  if (resolution == 0) throw ContractError("cg mask: zero resolution");

  std::size_t side = static_cast<std::size_t>(1) << depth;  // cells per axis
  std::vector<bool> blank(side * side, false);
  for (std::size_t cy = 0; cy < side; ++cy) {
    for (std::size_t cx = 0; cx < side; ++cx) {
      // Bits from most significant down = symbols most recent first.
      std::uint32_t prev = 5;  // sentinel, no symbol
      bool suppressed = false;
      for (std::size_t b = depth; b-- > 0;) {
        std::uint32_t xb = static_cast<std::uint32_t>((cx >> b) & 1);
        std::uint32_t yb = static_cast<std::uint32_t>((cy >> b) & 1);
        std::uint32_t s = xb == 0 ? (yb == 0 ? 0u : 1u) : (yb == 0 ? 3u : 2u);
        // Recent-first scan: seeing G then C means chronological C->G.
        if (prev == 2 && s == 1) {
          suppressed = true;
          break;
        }
        prev = s;
      }
      if (suppressed) blank[cy * side + cx] = true;
    }
  }

  RasterImage img;
  img.width = resolution;
  img.height = resolution;
  img.window = {0.0, 1.0, 0.0, 1.0};
  img.pixels.resize(resolution * resolution);
  for (std::size_t row = 0; row < resolution; ++row) {
    double y = 1.0 - (static_cast<double>(row) + 0.5) / static_cast<double>(resolution);
    std::size_t cy = std::min(static_cast<std::size_t>(y * static_cast<double>(side)),
                              side - 1);
    for (std::size_t col = 0; col < resolution; ++col) {
      double x = (static_cast<double>(col) + 0.5) / static_cast<double>(resolution);
      std::size_t cx = std::min(static_cast<std::size_t>(x * static_cast<double>(side)),
                                side - 1);
      img.pixels[row * resolution + col] = blank[cy * side + cx] ? 0.0 : 1.0;
    }
  }
  return img;
}

}  // namespace cgr

#endif  // CGR_CHAOS_GAME_HPP
