#include "sparsegrid/error.hpp"
#include "sparsegrid/generators.hpp"
#include "sparsegrid/raster.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace sparsegrid;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

ErrorCode decode_error(const std::string& s) {
  try {
    decode_pgm(bytes_of(s));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decoded");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("decode a 2x2 PGM in row-major order") {
  const std::string file = std::string("P5\n2 2\n255\n") + std::string{'\0', char(128), char(255), char(7)};
  const GrayImage img = decode_pgm(bytes_of(file));
  REQUIRE(img.rows() == 2);
  REQUIRE(img.cols() == 2);
  CHECK(img(0, 0) == 0);
  CHECK(img(0, 1) == 128);
  CHECK(img(1, 0) == 255);
  CHECK(img(1, 1) == 7);
}

TEST_CASE("header comments and whitespace are accepted") {
  const std::string file = std::string("P5 # comment\n3\t1 # w h\n# another\n255 ") + "abc";
  const GrayImage img = decode_pgm(bytes_of(file));
  CHECK(img.cols() == 3);
  CHECK(img(0, 2) == 'c');
}

TEST_CASE("PGM errors") {
  CHECK(decode_error("P2\n2 2\n255\n0 0 0 0\n") == ErrorCode::UnsupportedFormat);
  CHECK(decode_error("P6\n1 1\n255\nabc") == ErrorCode::UnsupportedFormat);
  CHECK(decode_error("P5\n1 1\n65535\nab") == ErrorCode::UnsupportedFormat);
  CHECK(decode_error("P5\n2 2\n255\nabc") == ErrorCode::CorruptHeader);
  CHECK(decode_error("P5\n2\n") == ErrorCode::CorruptHeader);
  CHECK(decode_error("P5\n0 2\n255\n") == ErrorCode::CorruptHeader);
  CHECK(decode_error("JUNK") == ErrorCode::CorruptHeader);
  CHECK(decode_error("") == ErrorCode::CorruptHeader);
  CHECK(decode_error("P5\n1 1\n255") == ErrorCode::CorruptHeader);
}

TEST_CASE("save and load round trip") {
  GrayImage img(5, 7);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>((i * 37) % 256);
  const auto path = std::filesystem::temp_directory_path() / "sparsegrid_raster_roundtrip.pgm";
  save_pgm(img, path);
  CHECK((load_pgm(path) == img).all());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_pgm(path), Error);
}

TEST_CASE("saving quantizes by rounding and clipping") {
  GrayImage img(1, 4);
  img << -3.0, 2.5, 100.49, 300.0;
  const GrayImage back = decode_pgm(encode_pgm(img));
  CHECK(back(0, 0) == 0);
  CHECK(back(0, 1) == 3);
  CHECK(back(0, 2) == 100);
  CHECK(back(0, 3) == 255);
  CHECK((quantize8(img) == back).all());
}

TEST_CASE("center crop offsets") {
  CHECK(center_crop_offset({4, 4}, {2, 2}) == Coord{1, 1});
  CHECK(center_crop_offset({5, 5}, {2, 2}) == Coord{1, 1});
  CHECK(center_crop_offset({7, 4}, {4, 4}) == Coord{1, 0});
  CHECK(center_crop_offset({3, 3}, {3, 3}) == Coord{0, 0});
  try {
    center_crop_offset({3, 3}, {4, 3});
    FAIL("expected CropTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CropTooLarge);
  }

  GrayImage img(5, 5);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>(i);
  const GrayImage c = center_crop(img, {2, 2});
  CHECK(c(0, 0) == img(1, 1));
  CHECK(c(1, 1) == img(2, 2));
  CHECK((center_crop(img, {5, 5}) == img).all());
  // Works on any dense expression, e.g. a bitmap.
  const Bitmap b = center_crop(Bitmap(img > 12.0), {3, 3});
  CHECK(b.count() == 4);
}

TEST_CASE("apply_mask copies sampled values only") {
  const GridDims dims{10, 10};
  GrayImage img(10, 10);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = 1.0 + static_cast<double>(i);
  const SamplingPattern p = gen_rand(dims, 100, 3);

  const SampledImage quarter = apply_mask(img, prefix(p, 0.25));
  CHECK(quarter.sample_count() == 25);
  for (const Coord& c : prefix(p, 0.25).points()) CHECK(quarter.values(c.y, c.x) == img(c.y, c.x));
  CHECK((quarter.values != 0.0).count() == 25);

  const SampledImage full = apply_mask(img, prefix(p, 1.0));
  CHECK(full.mask.all());
  CHECK((full.values == img).all());

  const SampledImage none = apply_mask(img, prefix_of_count(p, 0));
  CHECK_FALSE(none.mask.any());

  const SamplingPattern other = gen_rand({10, 9}, 10, 1);
  try {
    apply_mask(img, prefix_of_count(other, 10));
    FAIL("expected DimsMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimsMismatch);
  }
  CHECK(fully_sampled(img).mask.all());
}
