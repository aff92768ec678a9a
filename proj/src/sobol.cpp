#include "sparsegrid/sobol.hpp"

#include "sparsegrid/error.hpp"

#include <bit>

namespace sparsegrid {

Sobol2D::Point Sobol2D::at(std::uint64_t index) {
  if (index >= kPeriod) throw Error(ErrorCode::SobolExhausted, "Sobol index beyond 2^32");
  std::uint64_t gray = index ^ (index >> 1);
  Point p{0, 0};
  for (int bit = 0; gray != 0; ++bit, gray >>= 1) {
    if (gray & 1u) {
      p[0] ^= kSobolDirections[0][bit];
      p[1] ^= kSobolDirections[1][bit];
    }
  }
  return p;
}

Sobol2D::Sobol2D(std::uint64_t start_index) : index_(start_index), state_(at(start_index)) {}

Sobol2D::Point Sobol2D::next() {
  if (index_ >= kPeriod) throw Error(ErrorCode::SobolExhausted, "Sobol index beyond 2^32");
  const Point out = state_;
  ++index_;
  if (index_ < kPeriod) {
    // gray(i) xor gray(i-1) has exactly the bit at the lowest set bit of i.
    const int bit = std::countr_zero(index_);
    state_[0] ^= kSobolDirections[0][bit];
    state_[1] ^= kSobolDirections[1][bit];
  }
  return out;
}

}  // namespace sparsegrid
