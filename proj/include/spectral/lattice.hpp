#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spectral {

using Index = std::uint64_t;
using Residue = std::uint64_t;
using Complex = std::complex<double>;

/// A point of Z_N^d. Coordinates are residues in [0, N) once produced by
/// GridShape::point(); raw construction is allowed but every operation that
/// takes a shape reduces or validates.
struct GridPoint {
  std::vector<Residue> coords;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// The ambient group Z_N^d.
///
/// N >= 2, d >= 1, and N^d must fit in an Index and in a std::size_t;
/// otherwise construction throws DomainError. Linear indices are row-major
/// mixed-radix: the last coordinate varies fastest.
class GridShape {
 public:
  GridShape(std::uint64_t modulus, std::size_t dim);

  /// Parses "NxD", e.g. "16x2".
  static GridShape parse(std::string_view text);

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::size_t dim() const noexcept { return dim_; }
  /// N^d.
  Index size() const noexcept { return size_; }
  /// Stride of coordinate j in the linear index (N^{d-1-j}).
  Index stride(std::size_t axis) const;

  /// Builds a point from signed coordinates, reducing each modulo N.
  GridPoint point(const std::vector<std::int64_t>& coords) const;
  GridPoint decode(Index linear) const;
  Index encode(const GridPoint& p) const;

  Index negate(Index linear) const;
  Index add(Index a, Index b) const;

  std::string to_string() const;

  friend bool operator==(const GridShape&, const GridShape&) = default;

 private:
  void check_point(const GridPoint& p) const;

  std::uint64_t modulus_;
  std::size_t dim_;
  Index size_;
};

/// (a . b) mod N without intermediate overflow.
Residue dot(const GridPoint& a, const GridPoint& b, const GridShape& shape);

/// Same, on linear indices.
Residue dot(Index a, Index b, const GridShape& shape);

/// e^{-2 pi i (a . b) / N}. Forward-transform sign convention; the inverse
/// transform uses the conjugate.
Complex character(const GridPoint& a, const GridPoint& b, const GridShape& shape);

/// e^{-2 pi i r / N} for a residue r.
Complex unit_root(Residue r, std::uint64_t modulus);

}  // namespace spectral
