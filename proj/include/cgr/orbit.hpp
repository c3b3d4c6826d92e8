#ifndef CGR_ORBIT_HPP
#define CGR_ORBIT_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "cgr/error.hpp"

namespace cgr {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
};

/// A point orbit. `points` holds every iterate including the seed and any
/// transient; `burn_in` says how many leading points downstream statistics
/// should skip. The raw orbit always keeps them.
struct Orbit {
  std::vector<Point2> points;
  Point2 start;
  std::size_t burn_in = 0;

  std::size_t settled_count() const {
    return points.size() > burn_in ? points.size() - burn_in : 0;
  }
};

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline void put_f64_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b.data()), 8);
}

inline std::uint32_t get_u32_le(std::istream& is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char*>(b.data()), 4);
  if (!is) throw ParseError("orbit dump: truncated header");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

inline double get_f64_le(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  if (!is) throw ParseError("orbit dump: truncated point data");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | b[static_cast<std::size_t>(i)];
  return std::bit_cast<double>(bits);
}

}  // namespace detail

inline constexpr char kOrbitMagic[4] = {'C', 'G', 'R', '1'};

/// Binary orbit dump: "CGR1", u32 point count, then count little-endian
/// (f64 x, f64 y) pairs. Round-trips bit-exactly.
inline void write_orbit(std::ostream& os, const Orbit& orbit) {
  os.write(kOrbitMagic, 4);
  detail::put_u32_le(os, static_cast<std::uint32_t>(orbit.points.size()));
  for (const Point2& p : orbit.points) {
    detail::put_f64_le(os, p.x);
    detail::put_f64_le(os, p.y);
  }
  if (!os) throw ParseError("orbit dump: write failed");
}

inline void write_orbit_file(const std::string& path, const Orbit& orbit) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("orbit dump: cannot open " + path + " for writing");
  write_orbit(os, orbit);
}

inline Orbit read_orbit(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kOrbitMagic, 4) != 0)
    throw ParseError("orbit dump: bad magic, expected CGR1");
  std::uint32_t count = detail::get_u32_le(is);
  Orbit orbit;
  orbit.points.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    double x = detail::get_f64_le(is);
    double y = detail::get_f64_le(is);
    orbit.points.push_back({x, y});
  }
  if (!orbit.points.empty()) orbit.start = orbit.points.front();
  return orbit;
}

inline Orbit read_orbit_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("orbit dump: cannot open " + path);
  return read_orbit(is);
}

/// CSV export, one "x,y" row per point, full round-trip precision.
inline void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
  os << "x,y\n";
  char buf[64];
  for (const Point2& p : orbit.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    os << buf;
  }
}

inline void write_orbit_csv_file(const std::string& path, const Orbit& orbit) {
  std::ofstream os(path);
  if (!os) throw ParseError("orbit csv: cannot open " + path + " for writing");
  write_orbit_csv(os, orbit);
}

}  // namespace cgr

#endif  // CGR_ORBIT_HPP
