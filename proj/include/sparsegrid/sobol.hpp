#pragma once

#include <array>
#include <cstdint>

namespace sparsegrid {

/// Direction numbers v_k = m_k * 2^(32-k), k = 1..32, for the two Sobol
/// dimensions. Dimension 0 is the base-2 van der Corput sequence (m_k = 1);
/// dimension 1 uses the primitive polynomial x + 1, m_k = 2 m_{k-1} xor m_{k-1}.
inline constexpr std::array<std::array<std::uint32_t, 32>, 2> kSobolDirections = {{
    {0x80000000, 0x40000000, 0x20000000, 0x10000000, 0x08000000, 0x04000000, 0x02000000, 0x01000000,
     0x00800000, 0x00400000, 0x00200000, 0x00100000, 0x00080000, 0x00040000, 0x00020000, 0x00010000,
     0x00008000, 0x00004000, 0x00002000, 0x00001000, 0x00000800, 0x00000400, 0x00000200, 0x00000100,
     0x00000080, 0x00000040, 0x00000020, 0x00000010, 0x00000008, 0x00000004, 0x00000002, 0x00000001},
    {0x80000000, 0xc0000000, 0xa0000000, 0xf0000000, 0x88000000, 0xcc000000, 0xaa000000, 0xff000000,
     0x80800000, 0xc0c00000, 0xa0a00000, 0xf0f00000, 0x88880000, 0xcccc0000, 0xaaaa0000, 0xffff0000,
     0x80008000, 0xc000c000, 0xa000a000, 0xf000f000, 0x88008800, 0xcc00cc00, 0xaa00aa00, 0xff00ff00,
     0x80808080, 0xc0c0c0c0, 0xa0a0a0a0, 0xf0f0f0f0, 0x88888888, 0xcccccccc, 0xaaaaaaaa, 0xffffffff},
}};

// Two-dimensional Sobol sequence in Gray-code order (Antonov-Saleev update),
// as 32-bit fixed point fractions of the unit square.
class Sobol2D {
 public:
  using Point = std::array<std::uint32_t, 2>;

  static constexpr std::uint64_t kPeriod = std::uint64_t{1} << 32;

  explicit Sobol2D(std::uint64_t start_index = 0);

  /// Point at the current index; advances by one.
  Point next();

  std::uint64_t index() const { return index_; }

  /// Point at an arbitrary index, computed directly from the Gray code.
  static Point at(std::uint64_t index);

  static double to_unit(std::uint32_t fixed) { return static_cast<double>(fixed) * 0x1.0p-32; }

 private:
  std::uint64_t index_;
  Point state_;
};

}  // namespace sparsegrid
