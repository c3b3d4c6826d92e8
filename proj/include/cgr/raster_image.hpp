#ifndef CGR_RASTER_IMAGE_HPP
#define CGR_RASTER_IMAGE_HPP

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/orbit.hpp"

namespace cgr {

/// World-coordinate rectangle a raster covers.
struct Window {
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Grayscale raster. Row-major, row 0 is the top row; world y increases
/// upward, so the top row covers the window's largest y values.
struct RasterImage {
  std::size_t width = 0, height = 0;
  std::vector<double> pixels;  // intensities in [0, 1]
  Window window;

  double& at(std::size_t row, std::size_t col) {
    return pixels[row * width + col];
  }
  double at(std::size_t row, std::size_t col) const {
    return pixels[row * width + col];
  }

  void validate() const {
    if (width == 0 || height == 0 || pixels.size() != width * height)
      throw ContractError("raster: dimensions do not match pixel count");
    for (double v : pixels)
      if (!(v >= 0.0 && v <= 1.0))
        throw ContractError("raster: intensity outside [0, 1]");
  }
};

enum class RasterMode { Binary, LogCount };

/// Bins orbit points (after burn-in) into a grid. Binary mode marks hit
/// pixels 1; log-count mode scales ln(1+c)/ln(1+c_max) so the densest
/// pixel is exactly 1. Points at the window's max edge clamp to the last
/// pixel; points outside the window are dropped and counted.
inline RasterImage rasterize(const Orbit& orbit, std::size_t width,
                             std::size_t height, Window window,
                             RasterMode mode = RasterMode::Binary,
                             std::size_t* dropped = nullptr) {
  if (width == 0 || height == 0)
    throw ContractError("rasterize: zero raster dimension");
  if (!(window.width() > 0.0) || !(window.height() > 0.0))
    throw ContractError("rasterize: window must have positive area");
  if (orbit.points.size() <= orbit.burn_in)
    throw ContractError("rasterize: orbit empty after burn-in");

  std::vector<std::uint64_t> counts(width * height, 0);
  std::size_t outside = 0;
  for (std::size_t i = orbit.burn_in; i < orbit.points.size(); ++i) {
    const Point2& p = orbit.points[i];
    if (p.x < window.xmin || p.x > window.xmax || p.y < window.ymin ||
        p.y > window.ymax) {
      ++outside;
      continue;
    }
    auto col = static_cast<std::size_t>(
        std::min<double>(std::floor((p.x - window.xmin) / window.width() *
                                    static_cast<double>(width)),
                         static_cast<double>(width - 1)));
    auto row_up = static_cast<std::size_t>(
        std::min<double>(std::floor((p.y - window.ymin) / window.height() *
                                    static_cast<double>(height)),
                         static_cast<double>(height - 1)));
    std::size_t row = height - 1 - row_up;  // row 0 on top
    ++counts[row * width + col];
  }
  if (dropped) *dropped = outside;

  RasterImage img;
  img.width = width;
  img.height = height;
  img.window = window;
  img.pixels.resize(width * height, 0.0);
  if (mode == RasterMode::Binary) {
    for (std::size_t i = 0; i < counts.size(); ++i)
      img.pixels[i] = counts[i] > 0 ? 1.0 : 0.0;
  } else {
    std::uint64_t cmax = 0;
    for (std::uint64_t c : counts) cmax = std::max(cmax, c);
    if (cmax > 0) {
      double denom = std::log1p(static_cast<double>(cmax));
      for (std::size_t i = 0; i < counts.size(); ++i)
        img.pixels[i] = std::log1p(static_cast<double>(counts[i])) / denom;
    }
  }
  return img;
}

namespace detail {

inline std::uint8_t quantize255(double v) {
  double q = std::floor(255.0 * v + 0.5);  // round half up
  if (q < 0.0) q = 0.0;
  if (q > 255.0) q = 255.0;
  return static_cast<std::uint8_t>(q);
}

inline std::vector<std::uint8_t> gray_bytes(const RasterImage& img) {
  std::vector<std::uint8_t> bytes(img.width * img.height);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = quantize255(img.pixels[i]);
  return bytes;
}

}  // namespace detail

/// PGM P5: "P5\n<w> <h>\n255\n" then w*h bytes, top row first.
inline void write_pgm(std::ostream& os, const RasterImage& img) {
  img.validate();
  os << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::vector<std::uint8_t> bytes = detail::gray_bytes(img);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw ParseError("PGM: write failed");
}

inline void write_pgm_file(const std::string& path, const RasterImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("PGM: cannot open " + path + " for writing");
  write_pgm(os, img);
}

inline RasterImage read_pgm(std::istream& is) {
  auto next_token = [&is]() {
    std::string tok;
    int ch;
    while ((ch = is.get()) != EOF) {
      if (ch == '#') {
        while ((ch = is.get()) != EOF && ch != '\n') {
        }
        continue;
      }
      if (std::isspace(ch)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(ch));
    }
    if (tok.empty()) throw ParseError("PGM: truncated header");
    return tok;
  };
  if (next_token() != "P5") throw ParseError("PGM: expected magic P5");
  std::size_t w = std::stoul(next_token());
  std::size_t h = std::stoul(next_token());
  std::size_t maxval = std::stoul(next_token());
  if (w == 0 || h == 0 || maxval != 255)
    throw ParseError("PGM: unsupported dimensions or maxval");
  std::vector<std::uint8_t> bytes(w * h);
  is.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(is.gcount()) != bytes.size())
    throw ParseError("PGM: truncated pixel data");
  RasterImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(w * h);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    img.pixels[i] = static_cast<double>(bytes[i]) / 255.0;
  return img;
}

inline RasterImage read_pgm_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("PGM: cannot open " + path);
  return read_pgm(is);
}

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                          const std::vector<std::uint8_t>& data) {
  put_u32_be(out, static_cast<std::uint32_t>(data.size()));
  std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0L, out.data() + crc_start,
                    static_cast<uInt>(4 + data.size()));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

inline std::vector<std::uint8_t> zlib_deflate(
    const std::vector<std::uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()),
                Z_DEFAULT_COMPRESSION) != Z_OK)
    throw ParseError("PNG: zlib compression failed");
  out.resize(bound);
  return out;
}

inline std::vector<std::uint8_t> zlib_inflate(const std::uint8_t* data,
                                              std::size_t size,
                                              std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf dest_len = static_cast<uLongf>(expected);
  if (uncompress(out.data(), &dest_len, data, static_cast<uLong>(size)) !=
          Z_OK ||
      dest_len != expected)
    throw ParseError("PNG: zlib decompression failed");
  return out;
}

}  // namespace detail

/// PNG, 8-bit grayscale, one IDAT, zlib default compression, filter 0 on
/// every row. Readable by any standards-conforming decoder.
inline std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  img.validate();
  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

  std::vector<std::uint8_t> ihdr;
  detail::put_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
  detail::put_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // color type: grayscale
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace
  detail::put_png_chunk(out, "IHDR", ihdr);

  std::vector<std::uint8_t> gray = detail::gray_bytes(img);
  std::vector<std::uint8_t> raw;
  raw.reserve((img.width + 1) * img.height);
  for (std::size_t row = 0; row < img.height; ++row) {
    raw.push_back(0);  // filter type 0 (None)
    raw.insert(raw.end(), gray.begin() + static_cast<std::ptrdiff_t>(row * img.width),
               gray.begin() + static_cast<std::ptrdiff_t>((row + 1) * img.width));
  }
  detail::put_png_chunk(out, "IDAT", detail::zlib_deflate(raw));
  detail::put_png_chunk(out, "IEND", {});
  return out;
}

inline void write_png_file(const std::string& path, const RasterImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("PNG: cannot open " + path + " for writing");
  std::vector<std::uint8_t> bytes = encode_png(img);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw ParseError("PNG: write failed");
}

/// Decodes the grayscale PNG subset this library writes, plus all five
/// standard row filters so externally produced files load too.
inline RasterImage decode_png(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0)
    throw ParseError("PNG: bad signature");

  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  bool have_ihdr = false;
  std::vector<std::uint8_t> idat;
  auto read_u32 = [&bytes](std::size_t at) -> std::uint32_t {
    return (static_cast<std::uint32_t>(bytes[at]) << 24) |
           (static_cast<std::uint32_t>(bytes[at + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[at + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[at + 3]);
  };
  while (pos + 8 <= bytes.size()) {
    std::uint32_t len = read_u32(pos);
    if (pos + 12 + len > bytes.size()) throw ParseError("PNG: truncated chunk");
    std::string type(bytes.begin() + static_cast<std::ptrdiff_t>(pos + 4),
                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + 8));
    const std::uint8_t* data = bytes.data() + pos + 8;
    if (type == "IHDR") {
      width = read_u32(pos + 8);
      height = read_u32(pos + 12);
      if (data[8] != 8 || data[9] != 0 || data[10] != 0 || data[11] != 0 ||
          data[12] != 0)
        throw ParseError("PNG: only 8-bit non-interlaced grayscale supported");
      have_ihdr = true;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (!have_ihdr || width == 0 || height == 0)
    throw ParseError("PNG: missing or empty IHDR");

  std::size_t stride = width;
  std::vector<std::uint8_t> raw = detail::zlib_inflate(
      idat.data(), idat.size(), (stride + 1) * height);

  std::vector<std::uint8_t> gray(width * height);
  std::vector<std::uint8_t> prior(stride, 0);
  for (std::size_t row = 0; row < height; ++row) {
    const std::uint8_t* src = raw.data() + row * (stride + 1);
    std::uint8_t filter = src[0];
    std::uint8_t* dst = gray.data() + row * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      int x = src[1 + i];
      int a = i > 0 ? dst[i - 1] : 0;   // left
      int b = prior[i];                 // up
      int c = i > 0 ? prior[i - 1] : 0; // up-left
      int v;
      switch (filter) {
        case 0: v = x; break;
        case 1: v = x + a; break;
        case 2: v = x + b; break;
        case 3: v = x + (a + b) / 2; break;
        case 4: {
          int p = a + b - c;
          int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          int pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          v = x + pred;
          break;
        }
        default:
          throw ParseError("PNG: unknown filter type " + std::to_string(filter));
      }
      dst[i] = static_cast<std::uint8_t>(v & 0xFF);
    }
    std::memcpy(prior.data(), dst, stride);
  }

  RasterImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i)
    img.pixels[i] = static_cast<double>(gray[i]) / 255.0;
  return img;
}

inline RasterImage read_png_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("PNG: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

/// CSV: header then one intensity row per raster row, top row first.
inline void write_raster_csv(std::ostream& os, const RasterImage& img) {
  os << "# " << img.width << "x" << img.height << "\n";
  char buf[32];
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      std::snprintf(buf, sizeof buf, "%.10g", img.at(r, c));
      os << buf << (c + 1 < img.width ? "," : "\n");
    }
  }
}

}  // namespace cgr

#endif  // CGR_RASTER_IMAGE_HPP
