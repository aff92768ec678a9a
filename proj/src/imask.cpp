#include "sparsegrid/imask.hpp"

#include "sparsegrid/error.hpp"
#include "sparsegrid/raster.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace sparsegrid {

namespace {

constexpr std::string_view kMagic = "IMASK 1";

// Splits on single spaces; empty fields (double or trailing spaces) are errors.
std::vector<std::int64_t> parse_fields(std::string_view line, std::size_t expected, long line_no) {
  std::vector<std::int64_t> values;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(' ', pos);
    std::string_view field = line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (field.empty()) throw Error(ErrorCode::FormatError, "empty field", line_no);
    if (field.front() == '+') throw Error(ErrorCode::FormatError, "unexpected sign", line_no);
    // Only canonical decimals, so parsing and serializing are inverse.
    const std::string_view digits = field.front() == '-' ? field.substr(1) : field;
    if ((digits.size() > 1 && digits.front() == '0') || field == "-0") {
      throw Error(ErrorCode::FormatError, "non-canonical integer '" + std::string(field) + "'", line_no);
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::FormatError, "not a decimal integer: '" + std::string(field) + "'", line_no);
    }
    values.push_back(v);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (values.size() != expected) {
    throw Error(ErrorCode::FormatError,
                "expected " + std::to_string(expected) + " fields, found " + std::to_string(values.size()), line_no);
  }
  return values;
}

}  // namespace

std::string serialize_imask(const SamplingPattern& pattern) {
  std::string out;
  out.reserve(32 + pattern.size() * 10);
  out += kMagic;
  out += '\n';
  out += std::to_string(pattern.dims().width) + ' ' + std::to_string(pattern.dims().height) + ' ' +
         std::to_string(pattern.size()) + '\n';
  char buf[48];
  for (const Coord& c : pattern.points()) {
    auto* p = std::to_chars(buf, buf + sizeof buf, c.x).ptr;
    *p++ = ' ';
    p = std::to_chars(p, buf + sizeof buf, c.y).ptr;
    *p++ = '\n';
    out.append(buf, p);
  }
  return out;
}

SamplingPattern parse_imask(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      throw Error(ErrorCode::FormatError, "missing final newline", static_cast<long>(lines.size()) + 1);
    }
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty() || lines[0] != kMagic) throw Error(ErrorCode::FormatError, "expected 'IMASK 1' header", 1);
  if (lines.size() < 2) throw Error(ErrorCode::FormatError, "missing dimension line", 2);

  auto header = parse_fields(lines[1], 3, 2);
  if (header[0] < 1 || header[1] < 1) throw Error(ErrorCode::FormatError, "dimensions must be positive", 2);
  if (header[0] > INT32_MAX || header[1] > INT32_MAX) throw Error(ErrorCode::FormatError, "dimensions too large", 2);
  if (header[2] < 0) throw Error(ErrorCode::FormatError, "negative point count", 2);
  const GridDims dims{static_cast<int>(header[0]), static_cast<int>(header[1])};
  const auto count = static_cast<std::size_t>(header[2]);
  if (lines.size() - 2 != count) {
    throw Error(ErrorCode::FormatError,
                "header declares " + std::to_string(count) + " points, file holds " + std::to_string(lines.size() - 2),
                static_cast<long>(std::min(lines.size(), count + 2)) + 1);
  }

  std::vector<Coord> points;
  points.reserve(count);
  std::vector<bool> seen(dims.cells(), false);
  for (std::size_t i = 0; i < count; ++i) {
    const long line_no = static_cast<long>(i) + 3;
    auto xy = parse_fields(lines[i + 2], 2, line_no);
    if (xy[0] < 0 || xy[1] < 0 || xy[0] >= dims.width || xy[1] >= dims.height) {
      throw Error(ErrorCode::OutOfBounds,
                  "point (" + std::to_string(xy[0]) + ", " + std::to_string(xy[1]) + ") outside grid", line_no);
    }
    Coord c{static_cast<int>(xy[0]), static_cast<int>(xy[1])};
    auto idx = linear_index(dims, c);
    if (seen[idx]) throw Error(ErrorCode::DuplicatePoint, "repeated point", line_no);
    seen[idx] = true;
    points.push_back(c);
  }
  return SamplingPattern(dims, std::move(points));
}

void write_imask(const SamplingPattern& pattern, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  const std::string text = serialize_imask(pattern);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

SamplingPattern read_imask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_imask(ss.str());
}

void write_prefix_pgm(const DensityPrefix& prefix, const std::filesystem::path& path) {
  save_pgm(bitmap_to_gray(to_bitmap(prefix)), path);
}

}  // namespace sparsegrid
