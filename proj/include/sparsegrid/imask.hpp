#pragma once

#include "sparsegrid/pattern.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace sparsegrid {

// IMASK text format:
//   IMASK 1
//   <width> <height> <count>
//   <x> <y>            (count lines, acquisition order)
// Every line ends in '\n'; fields are separated by exactly one space.

std::string serialize_imask(const SamplingPattern& pattern);

/// Throws FormatError (with line number), OutOfBounds or DuplicatePoint.
SamplingPattern parse_imask(std::string_view text);

void write_imask(const SamplingPattern& pattern, const std::filesystem::path& path);
SamplingPattern read_imask(const std::filesystem::path& path);

/// Binary PGM of a prefix bitmap: 255 = sampled, 0 = not sampled.
void write_prefix_pgm(const DensityPrefix& prefix, const std::filesystem::path& path);

}  // namespace sparsegrid
