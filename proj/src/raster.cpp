#include "sparsegrid/raster.hpp"

#include "sparsegrid/error.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace sparsegrid {

namespace {

struct HeaderReader {
  std::span<const unsigned char> bytes;
  std::size_t pos = 0;

  void skip_space_and_comments() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw Error(ErrorCode::CorruptHeader, "expected a decimal header field");
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000'000L) throw Error(ErrorCode::CorruptHeader, "header field out of range");
      ++pos;
    }
    return v;
  }
};

}  // namespace

GrayImage decode_pgm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::CorruptHeader, "missing PNM magic");
  if (bytes[1] != '5') {
    throw Error(ErrorCode::UnsupportedFormat, std::string("PNM variant P") + static_cast<char>(bytes[1]));
  }
  HeaderReader r{bytes, 2};
  const long width = r.number();
  const long height = r.number();
  const long maxval = r.number();
  if (width < 1 || height < 1) throw Error(ErrorCode::CorruptHeader, "image dimensions must be positive");
  if (maxval != 255) throw Error(ErrorCode::UnsupportedFormat, "maxval " + std::to_string(maxval));
  // Exactly one whitespace byte separates the header from the raster.
  if (r.pos >= bytes.size() || !std::isspace(bytes[r.pos])) {
    throw Error(ErrorCode::CorruptHeader, "missing separator after maxval");
  }
  ++r.pos;
  const auto need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - r.pos < need) throw Error(ErrorCode::CorruptHeader, "truncated pixel data");

  GrayImage img(height, width);
  const unsigned char* px = bytes.data() + r.pos;
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = px[i];
  return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

std::vector<unsigned char> encode_pgm(const GrayImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  const GrayImage q = quantize8(image);
  out.reserve(out.size() + static_cast<std::size_t>(q.size()));
  for (Eigen::Index i = 0; i < q.size(); ++i) out.push_back(static_cast<unsigned char>(q.data()[i]));
  return out;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

Coord center_crop_offset(GridDims source, GridDims crop) {
  if (crop.width < 1 || crop.height < 1) throw Error(ErrorCode::InvalidArgument, "crop must be non-empty");
  if (crop.width > source.width || crop.height > source.height) {
    throw Error(ErrorCode::CropTooLarge, "crop exceeds image");
  }
  return {(source.width - crop.width) / 2, (source.height - crop.height) / 2};
}

SampledImage apply_mask(const GrayImage& image, const DensityPrefix& prefix) {
  if (dims_of(image) != prefix.dims()) throw Error(ErrorCode::DimsMismatch, "image and pattern dimensions differ");
  SampledImage s;
  s.mask = to_bitmap(prefix);
  s.values = GrayImage::Zero(image.rows(), image.cols());
  for (const Coord& c : prefix.points()) s.values(c.y, c.x) = image(c.y, c.x);
  return s;
}

SampledImage fully_sampled(const GrayImage& image) {
  return {image, Bitmap::Constant(image.rows(), image.cols(), true)};
}

}  // namespace sparsegrid
