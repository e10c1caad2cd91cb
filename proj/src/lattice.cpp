#include "spectral/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

__extension__ typedef unsigned __int128 Wide;

Residue mulmod(Residue a, Residue b, std::uint64_t n) {
  return static_cast<Residue>((static_cast<Wide>(a) * b) % n);
}

Residue addmod(Residue a, Residue b, std::uint64_t n) {
  const Wide s = static_cast<Wide>(a) + b;
  return static_cast<Residue>(s % n);
}

}  // namespace

GridShape::GridShape(std::uint64_t modulus, std::size_t dim) : modulus_(modulus), dim_(dim), size_(1) {
  if (modulus < 2) throw DomainError("grid modulus must be >= 2, got " + std::to_string(modulus));
  if (dim < 1) throw DomainError("grid dimension must be >= 1");
  const Index limit = std::min<Index>(std::numeric_limits<Index>::max(), std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < dim; ++j) {
    if (size_ > limit / modulus) {
      throw DomainError("grid " + std::to_string(modulus) + "^" + std::to_string(dim) +
                        " exceeds the addressable range");
    }
    size_ *= modulus;
  }
}

GridShape GridShape::parse(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw DomainError("grid must be written NxD, got '" + std::string(text) + "'");
  std::uint64_t n = 0;
  std::size_t d = 0;
  const auto lhs = text.substr(0, x);
  const auto rhs = text.substr(x + 1);
  auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), n);
  auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), d);
  if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc{} ||
      r2.ptr != rhs.data() + rhs.size()) {
    throw DomainError("grid must be written NxD, got '" + std::string(text) + "'");
  }
  return GridShape(n, d);
}

Index GridShape::stride(std::size_t axis) const {
  if (axis >= dim_) throw ShapeError("axis out of range");
  Index s = 1;
  for (std::size_t j = axis + 1; j < dim_; ++j) s *= modulus_;
  return s;
}

GridPoint GridShape::point(const std::vector<std::int64_t>& coords) const {
  if (coords.size() != dim_) throw ShapeError("point has wrong dimension");
  GridPoint p;
  p.coords.reserve(dim_);
  const auto n = static_cast<std::int64_t>(modulus_);
  for (auto c : coords) {
    auto r = c % n;
    if (r < 0) r += n;
    p.coords.push_back(static_cast<Residue>(r));
  }
  return p;
}

void GridShape::check_point(const GridPoint& p) const {
  if (p.coords.size() != dim_) {
    throw ShapeError("point of dimension " + std::to_string(p.coords.size()) + " used on grid " + to_string());
  }
}

GridPoint GridShape::decode(Index linear) const {
  if (linear >= size_) throw DomainError("linear index out of range");
  GridPoint p;
  p.coords.assign(dim_, 0);
  for (std::size_t j = dim_; j-- > 0;) {
    p.coords[j] = linear % modulus_;
    linear /= modulus_;
  }
  return p;
}

Index GridShape::encode(const GridPoint& p) const {
  check_point(p);
  Index linear = 0;
  for (auto c : p.coords) linear = linear * modulus_ + (c % modulus_);
  return linear;
}

Index GridShape::negate(Index linear) const {
  Index out = 0;
  Index scale = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    const Residue c = linear % modulus_;
    linear /= modulus_;
    out += ((modulus_ - c) % modulus_) * scale;
    scale *= modulus_;
  }
  return out;
}

Index GridShape::add(Index a, Index b) const {
  Index out = 0;
  Index scale = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    out += addmod(a % modulus_, b % modulus_, modulus_) * scale;
    a /= modulus_;
    b /= modulus_;
    scale *= modulus_;
  }
  return out;
}

std::string GridShape::to_string() const { return std::to_string(modulus_) + "x" + std::to_string(dim_); }

Residue dot(const GridPoint& a, const GridPoint& b, const GridShape& shape) {
  if (a.coords.size() != shape.dim() || b.coords.size() != shape.dim()) {
    throw ShapeError("dot: dimension mismatch on grid " + shape.to_string());
  }
  const auto n = shape.modulus();
  Residue acc = 0;
  for (std::size_t j = 0; j < shape.dim(); ++j) {
    acc = addmod(acc, mulmod(a.coords[j] % n, b.coords[j] % n, n), n);
  }
  return acc;
}

Residue dot(Index a, Index b, const GridShape& shape) {
  const auto n = shape.modulus();
  Residue acc = 0;
  for (std::size_t j = 0; j < shape.dim(); ++j) {
    acc = addmod(acc, mulmod(a % n, b % n, n), n);
    a /= n;
    b /= n;
  }
  return acc;
}

Complex unit_root(Residue r, std::uint64_t modulus) {
  r %= modulus;
  if (r == 0) return {1.0, 0.0};
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(modulus);
  return std::polar(1.0, angle);
}

Complex character(const GridPoint& a, const GridPoint& b, const GridShape& shape) {
  return unit_root(dot(a, b, shape), shape.modulus());
}

}  // namespace spectral
