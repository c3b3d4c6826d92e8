#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cgr/orbit.hpp"
#include "cgr/raster_image.hpp"
#include "cgr/splitmix64.hpp"

using namespace cgr;

namespace {

Orbit single_point_orbit(double x, double y) {
  Orbit orbit;
  orbit.points = {{x, y}};
  orbit.start = {x, y};
  orbit.burn_in = 0;
  return orbit;
}

std::filesystem::path temp_file(const std::string& stem) {
  return std::filesystem::temp_directory_path() / stem;
}

}  // namespace

TEST_CASE("a centered point lands in the middle cell") {
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage img =
      rasterize(single_point_orbit(0.5, 0.5), 3, 3, win, RasterMode::Binary);
  for (std::uint32_t r = 0; r < 3; ++r)
    for (std::uint32_t c = 0; c < 3; ++c)
      CHECK(img.at(r, c) == ((r == 1 && c == 1) ? 1.0 : 0.0));
}

TEST_CASE("row zero is the top of the window") {
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage img =
      rasterize(single_point_orbit(0.1, 0.9), 4, 4, win, RasterMode::Binary);
  CHECK(img.at(0, 0) == 1.0);  // high y maps to the first row
  RasterImage low =
      rasterize(single_point_orbit(0.9, 0.1), 4, 4, win, RasterMode::Binary);
  CHECK(low.at(3, 3) == 1.0);
}

TEST_CASE("points on the max edges clamp into the last cell") {
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage right =
      rasterize(single_point_orbit(1.0, 0.5), 2, 2, win, RasterMode::Binary);
  CHECK(right.at(1, 1) + right.at(0, 1) == 1.0);
  RasterImage top =
      rasterize(single_point_orbit(0.5, 1.0), 2, 2, win, RasterMode::Binary);
  CHECK(top.at(0, 0) + top.at(0, 1) == 1.0);
}

TEST_CASE("points outside the window are dropped and counted") {
  Orbit orbit;
  orbit.points = {{0.5, 0.5}, {2.0, 0.5}, {-0.1, 0.2}, {0.25, 0.25}};
  orbit.burn_in = 0;
  Window win{0.0, 1.0, 0.0, 1.0};
  std::size_t dropped = 99;
  RasterImage img = rasterize(orbit, 4, 4, win, RasterMode::Binary, &dropped);
  CHECK(dropped == 2);
  double total = 0.0;
  for (double v : img.pixels) total += v;
  CHECK(total == 2.0);
}

TEST_CASE("burn-in points are not rasterized") {
  Orbit orbit;
  orbit.points = {{0.1, 0.1}, {0.9, 0.9}};
  orbit.burn_in = 1;
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage img = rasterize(orbit, 2, 2, win, RasterMode::Binary);
  CHECK(img.at(0, 1) == 1.0);
  CHECK(img.at(1, 0) == 0.0);
}

TEST_CASE("rasterize rejects empty input and degenerate windows") {
  Orbit orbit = single_point_orbit(0.5, 0.5);
  CHECK_THROWS_AS(
      rasterize(orbit, 2, 2, Window{0.0, 0.0, 0.0, 1.0}, RasterMode::Binary),
      ContractError);
  CHECK_THROWS_AS(
      rasterize(orbit, 0, 2, Window{0.0, 1.0, 0.0, 1.0}, RasterMode::Binary),
      ContractError);
  Orbit all_burned;
  all_burned.points = {{0.5, 0.5}};
  all_burned.burn_in = 1;
  CHECK_THROWS_AS(rasterize(all_burned, 2, 2, Window{0.0, 1.0, 0.0, 1.0},
                            RasterMode::Binary),
                  ContractError);
}

TEST_CASE("log mode is monotone in the count and peaks at one") {
  Orbit orbit;
  // Cell (1,1) of a 2x2 grid gets 9 hits, (0,0) gets 3, (0,1) gets 1.
  for (int i = 0; i < 9; ++i) orbit.points.push_back({0.75, 0.25});
  for (int i = 0; i < 3; ++i) orbit.points.push_back({0.25, 0.75});
  orbit.points.push_back({0.75, 0.75});
  orbit.burn_in = 0;
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage img = rasterize(orbit, 2, 2, win, RasterMode::LogCount);
  CHECK(img.at(1, 1) == 1.0);
  CHECK(img.at(0, 0) > img.at(0, 1));
  CHECK(img.at(0, 1) > 0.0);
  CHECK(img.at(1, 0) == 0.0);
  CHECK(img.at(0, 0) ==
        Catch::Approx(std::log1p(3.0) / std::log1p(9.0)).epsilon(1e-12));

  RasterImage bin = rasterize(orbit, 2, 2, win, RasterMode::Binary);
  CHECK(bin.at(1, 1) == 1.0);
  CHECK(bin.at(0, 0) == 1.0);
  CHECK(bin.at(1, 0) == 0.0);
}

TEST_CASE("rasterization is deterministic and translation consistent") {
  SplitMix64 rng(5);
  Orbit orbit;
  orbit.burn_in = 0;
  for (int i = 0; i < 5000; ++i)
    orbit.points.push_back({rng.next_double(), rng.next_double()});
  Window win{0.0, 1.0, 0.0, 1.0};
  RasterImage a = rasterize(orbit, 64, 64, win, RasterMode::LogCount);
  RasterImage b = rasterize(orbit, 64, 64, win, RasterMode::LogCount);
  CHECK(a.pixels == b.pixels);

  // Shifting both points and window by the same offset keeps cell counts.
  Orbit shifted = orbit;
  for (Point2& p : shifted.points) {
    p.x += 3.0;
    p.y -= 2.0;
  }
  Window shifted_win{3.0, 4.0, -2.0, -1.0};
  RasterImage c = rasterize(shifted, 64, 64, shifted_win, RasterMode::Binary);
  RasterImage d = rasterize(orbit, 64, 64, win, RasterMode::Binary);
  std::size_t diff = 0;
  for (std::size_t i = 0; i < c.pixels.size(); ++i)
    if (c.pixels[i] != d.pixels[i]) ++diff;
  // Tiny FP disagreement at cell boundaries is possible but must be rare.
  CHECK(diff <= 2);
}

TEST_CASE("PGM writer emits exact quantized bytes") {
  RasterImage img;
  img.width = 1;
  img.height = 1;
  img.pixels = {1.0};
  std::ostringstream os(std::ios::binary);
  write_pgm(os, img);
  std::string expected = "P5\n1 1\n255\n";
  expected.push_back(static_cast<char>(0xFF));
  CHECK(os.str() == expected);

  RasterImage two;
  two.width = 2;
  two.height = 1;
  two.pixels = {0.0, 0.5};
  std::ostringstream os2(std::ios::binary);
  write_pgm(os2, two);
  std::string expected2 = "P5\n2 1\n255\n";
  expected2.push_back(static_cast<char>(0x00));
  expected2.push_back(static_cast<char>(0x80));  // round(127.5) rounds half up
  CHECK(os2.str() == expected2);
}

TEST_CASE("PGM round-trips quantized pixel values") {
  SplitMix64 rng(11);
  RasterImage img;
  img.width = 37;
  img.height = 23;
  for (std::size_t i = 0; i < 37u * 23u; ++i)
    img.pixels.push_back(rng.next_double());
  std::ostringstream os(std::ios::binary);
  write_pgm(os, img);
  std::istringstream is(os.str(), std::ios::binary);
  RasterImage back = read_pgm(is);
  REQUIRE(back.width == 37);
  REQUIRE(back.height == 23);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    double quantized =
        std::floor(img.pixels[i] * 255.0 + 0.5) / 255.0;
    REQUIRE(back.pixels[i] == Catch::Approx(quantized).margin(1e-12));
  }
}

TEST_CASE("PGM reader rejects foreign magic numbers") {
  std::istringstream is("P2\n1 1\n255\n0\n");
  CHECK_THROWS_AS(read_pgm(is), ParseError);
}

TEST_CASE("PNG encoding is deterministic and self-inverse") {
  SplitMix64 rng(12);
  RasterImage img;
  img.width = 65;
  img.height = 41;
  for (std::size_t i = 0; i < 65u * 41u; ++i)
    img.pixels.push_back(rng.next_double());
  std::vector<std::uint8_t> bytes = encode_png(img);
  std::vector<std::uint8_t> again = encode_png(img);
  CHECK(bytes == again);
  REQUIRE(bytes.size() > 8);
  const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  for (int i = 0; i < 8; ++i) REQUIRE(bytes[i] == sig[i]);

  RasterImage back = decode_png(bytes);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    double quantized = std::floor(img.pixels[i] * 255.0 + 0.5) / 255.0;
    REQUIRE(back.pixels[i] == Catch::Approx(quantized).margin(1e-12));
  }
}

TEST_CASE("PNG decoder rejects a bad signature") {
  std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(decode_png(junk), ParseError);
}

TEST_CASE("PNG decoder handles all five row filters") {
  // Build a PNG by hand with one row per filter type and check the decoder
  // against the reference reconstruction.
  const std::uint32_t w = 4, h = 5;
  std::vector<std::uint8_t> raw = {
      10,  20,  30,  40,   // filter 0 row stores these verbatim
      5,   5,   5,   5,    // filter 1: deltas against the left neighbour
      1,   2,   3,   4,    // filter 2: deltas against the row above
      7,   7,   7,   7,    // filter 3: average predictor
      200, 100, 50,  25,   // filter 4: Paeth predictor
  };
  const std::uint8_t filters[5] = {0, 1, 2, 3, 4};
  std::vector<std::uint8_t> scanlines;
  for (std::uint32_t r = 0; r < h; ++r) {
    scanlines.push_back(filters[r]);
    for (std::uint32_t c = 0; c < w; ++c) scanlines.push_back(raw[r * w + c]);
  }
  std::vector<std::uint8_t> idat = cgr::detail::zlib_deflate(scanlines);

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  std::vector<std::uint8_t> ihdr;
  cgr::detail::put_u32_be(ihdr, w);
  cgr::detail::put_u32_be(ihdr, h);
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // grayscale
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  cgr::detail::put_png_chunk(png, "IHDR", ihdr);
  cgr::detail::put_png_chunk(png, "IDAT", idat);
  cgr::detail::put_png_chunk(png, "IEND", {});

  RasterImage img = decode_png(png);
  REQUIRE(img.width == w);
  REQUIRE(img.height == h);

  // Reference reconstruction per the PNG filter definitions.
  auto paeth = [](int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
  };
  std::vector<std::uint8_t> expect(w * h, 0);
  for (std::uint32_t r = 0; r < h; ++r) {
    for (std::uint32_t c = 0; c < w; ++c) {
      int x = raw[r * w + c];
      int left = c > 0 ? expect[r * w + c - 1] : 0;
      int up = r > 0 ? expect[(r - 1) * w + c] : 0;
      int ul = (r > 0 && c > 0) ? expect[(r - 1) * w + c - 1] : 0;
      int value;
      switch (filters[r]) {
        case 0: value = x; break;
        case 1: value = x + left; break;
        case 2: value = x + up; break;
        case 3: value = x + (left + up) / 2; break;
        default: value = x + paeth(left, up, ul); break;
      }
      expect[r * w + c] = static_cast<std::uint8_t>(value & 0xFF);
    }
  }
  for (std::uint32_t r = 0; r < h; ++r)
    for (std::uint32_t c = 0; c < w; ++c)
      REQUIRE(img.at(r, c) ==
              Catch::Approx(expect[r * w + c] / 255.0).margin(1e-12));
}

TEST_CASE("image files write and read through paths") {
  RasterImage img;
  img.width = 8;
  img.height = 6;
  SplitMix64 rng(3);
  for (std::size_t i = 0; i < 48; ++i) img.pixels.push_back(rng.next_double());

  auto png_path = temp_file("cgr_test_roundtrip.png");
  write_png_file(png_path.string(), img);
  RasterImage png_back = read_png_file(png_path.string());
  CHECK(png_back.width == 8);
  CHECK(png_back.height == 6);
  std::filesystem::remove(png_path);

  auto pgm_path = temp_file("cgr_test_roundtrip.pgm");
  write_pgm_file(pgm_path.string(), img);
  RasterImage pgm_back = read_pgm_file(pgm_path.string());
  CHECK(pgm_back.pixels == png_back.pixels);
  std::filesystem::remove(pgm_path);
}

TEST_CASE("orbit dumps round-trip bit for bit") {
  Orbit orbit;
  orbit.start = {0.5, 0.5};
  orbit.burn_in = 20;
  SplitMix64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    orbit.points.push_back({rng.next_double() * 2.0 - 1.0,
                            rng.next_double() * 1e6});
  }
  orbit.points.push_back({0.1 + 0.2, 1.0 / 3.0});  // non-representable values

  std::ostringstream os(std::ios::binary);
  write_orbit(os, orbit);
  std::string blob = os.str();
  CHECK(blob.size() == 8 + orbit.points.size() * 16);
  CHECK(blob.substr(0, 4) == std::string(kOrbitMagic, 4));

  std::istringstream is(blob, std::ios::binary);
  Orbit back = read_orbit(is);
  REQUIRE(back.points.size() == orbit.points.size());
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    REQUIRE(back.points[i].x == orbit.points[i].x);
    REQUIRE(back.points[i].y == orbit.points[i].y);
  }
}

TEST_CASE("orbit reader rejects truncated and mislabeled dumps") {
  Orbit orbit;
  orbit.points = {{1.0, 2.0}};
  std::ostringstream os(std::ios::binary);
  write_orbit(os, orbit);
  std::string blob = os.str();

  std::istringstream truncated(blob.substr(0, blob.size() - 4),
                               std::ios::binary);
  CHECK_THROWS_AS(read_orbit(truncated), ParseError);

  std::string wrong = blob;
  wrong[0] = 'X';
  std::istringstream mislabeled(wrong, std::ios::binary);
  CHECK_THROWS_AS(read_orbit(mislabeled), ParseError);
}

TEST_CASE("csv exports carry coordinates and pixels") {
  Orbit orbit;
  orbit.points = {{0.25, 0.75}};
  orbit.burn_in = 0;
  std::ostringstream orbit_csv;
  write_orbit_csv(orbit_csv, orbit);
  CHECK(orbit_csv.str().find("x,y") != std::string::npos);
  CHECK(orbit_csv.str().find("0.25") != std::string::npos);

  RasterImage img;
  img.width = 2;
  img.height = 1;
  img.pixels = {0.0, 1.0};
  std::ostringstream raster_csv;
  write_raster_csv(raster_csv, img);
  CHECK(raster_csv.str().find('1') != std::string::npos);
}
