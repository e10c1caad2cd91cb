#pragma once

#include <span>
#include <vector>

#include "spectral/lattice.hpp"

namespace spectral {

enum class Domain { Space, Frequency };

/// A complex-valued function on Z_N^d stored in linear-index order.
/// Immutable after construction; length N^d and finite entries are checked.
template <Domain D>
class GridFunction {
 public:
  GridFunction(GridShape shape, std::vector<Complex> values);

  static GridFunction zeros(const GridShape& shape) {
    return GridFunction(shape, std::vector<Complex>(shape.size()));
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator[](Index i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  GridShape shape_;
  std::vector<Complex> values_;
};

using Signal = GridFunction<Domain::Space>;
using Spectrum = GridFunction<Domain::Frequency>;

extern template class GridFunction<Domain::Space>;
extern template class GridFunction<Domain::Frequency>;

/// A subset of frequency (or space) indices: sorted, duplicate-free.
class FreqSet {
 public:
  /// Sorts and deduplicates `members`; throws DomainError on out-of-range indices.
  FreqSet(GridShape shape, std::vector<Index> members);

  static FreqSet full(const GridShape& shape);

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const Index> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Index i) const;

  FreqSet complement() const;
  /// {-m : m in S}
  FreqSet negated() const;
  /// S translated by t.
  FreqSet translated(Index t) const;

  friend bool operator==(const FreqSet&, const FreqSet&) = default;

 private:
  GridShape shape_;
  std::vector<Index> members_;
};

/// Default relative cutoff for deciding spectral support numerically.
inline constexpr double kSupportTolerance = 1e-9;

/// f^(m) = N^{-d/2} sum_x e^{-2 pi i x.m/N} f(x).
Spectrum forward(const Signal& f);

/// f(x) = N^{-d/2} sum_m e^{+2 pi i x.m/N} F(m).
Signal inverse(const Spectrum& F);

/// The forward transform of the indicator of S, viewed as a function on the
/// grid: N^{-d/2} sum_{m in S} e^{-2 pi i x.m/N}. Throws DomainError on empty S.
Signal indicator_spectrum(const FreqSet& S);

/// Cyclic convolution (f*g)(x) = sum_y f(y) g(x-y). Direct O(N^{2d}) sum.
Signal convolve(const Signal& f, const Signal& g);

/// {m : |F(m)| > rel_tol * max(1, ||F||_inf)}.
FreqSet support(const Spectrum& F, double rel_tol = kSupportTolerance);

/// Reinterpretations between the two domains (no transform is applied).
Signal as_signal(const Spectrum& F);
Spectrum as_spectrum(const Signal& f);

}  // namespace spectral
