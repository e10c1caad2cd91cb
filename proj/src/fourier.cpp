#include "spectral/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "spectral/errors.hpp"

namespace spectral {

template <Domain D>
GridFunction<D>::GridFunction(GridShape shape, std::vector<Complex> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.size()) {
    throw ShapeError("expected " + std::to_string(shape_.size()) + " values on grid " + shape_.to_string() + ", got " +
                     std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw DomainError("non-finite value at linear index " + std::to_string(i));
    }
  }
}

template class GridFunction<Domain::Space>;
template class GridFunction<Domain::Frequency>;

FreqSet::FreqSet(GridShape shape, std::vector<Index> members) : shape_(std::move(shape)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.back() >= shape_.size()) {
    throw DomainError("set member " + std::to_string(members_.back()) + " outside grid " + shape_.to_string());
  }
}

FreqSet FreqSet::full(const GridShape& shape) {
  std::vector<Index> all(shape.size());
  for (Index i = 0; i < shape.size(); ++i) all[i] = i;
  return FreqSet(shape, std::move(all));
}

bool FreqSet::contains(Index i) const { return std::binary_search(members_.begin(), members_.end(), i); }

FreqSet FreqSet::complement() const {
  std::vector<Index> out;
  out.reserve(shape_.size() - members_.size());
  auto it = members_.begin();
  for (Index i = 0; i < shape_.size(); ++i) {
    if (it != members_.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return FreqSet(shape_, std::move(out));
}

FreqSet FreqSet::negated() const {
  std::vector<Index> out;
  out.reserve(members_.size());
  for (auto m : members_) out.push_back(shape_.negate(m));
  return FreqSet(shape_, std::move(out));
}

FreqSet FreqSet::translated(Index t) const {
  std::vector<Index> out;
  out.reserve(members_.size());
  for (auto m : members_) out.push_back(shape_.add(m, t));
  return FreqSet(shape_, std::move(out));
}

namespace {

// Forward-sign roots of unity e^{-2 pi i k/N}, k in [0, N).
std::vector<Complex> twiddles(std::uint64_t n) {
  std::vector<Complex> w(n);
  for (std::uint64_t k = 0; k < n; ++k) w[k] = unit_root(k, n);
  return w;
}

void direct_line(const std::vector<Complex>& w, std::vector<Complex>& line, std::vector<Complex>& scratch,
                 bool conjugate) {
  const std::size_t n = line.size();
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc{};
    std::size_t k = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const Complex t = conjugate ? std::conj(w[k]) : w[k];
      acc += line[x] * t;
      k += m;
      if (k >= n) k -= n;
    }
    scratch[m] = acc;
  }
  line.swap(scratch);
}

// In-place iterative radix-2 Cooley-Tukey; n must be a power of two.
void radix2_line(const std::vector<Complex>& w, std::vector<Complex>& a, bool conjugate) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex t = conjugate ? std::conj(w[k * step]) : w[k * step];
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * t;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// Unitary transform, one axis at a time. `conjugate` selects the inverse.
std::vector<Complex> transform(const GridShape& shape, std::span<const Complex> in, bool conjugate) {
  std::vector<Complex> data(in.begin(), in.end());
  const std::size_t n = shape.modulus();
  const auto w = twiddles(n);
  const bool fast = std::has_single_bit(n) && n >= 8;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> line(n), scratch(n);

  for (std::size_t axis = 0; axis < shape.dim(); ++axis) {
    const std::size_t stride = shape.stride(axis);
    const std::size_t outer = data.size() / (n * stride);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = o * n * stride + inner;
        for (std::size_t x = 0; x < n; ++x) line[x] = data[base + x * stride];
        if (fast) {
          radix2_line(w, line, conjugate);
        } else {
          direct_line(w, line, scratch, conjugate);
        }
        for (std::size_t x = 0; x < n; ++x) data[base + x * stride] = line[x] * scale;
      }
    }
  }
  return data;
}

}  // namespace

Spectrum forward(const Signal& f) { return Spectrum(f.shape(), transform(f.shape(), f.values(), false)); }

Signal inverse(const Spectrum& F) { return Signal(F.shape(), transform(F.shape(), F.values(), true)); }

Signal indicator_spectrum(const FreqSet& S) {
  if (S.empty()) throw DomainError("indicator_spectrum: empty set");
  const auto& shape = S.shape();
  const double norm = std::pow(static_cast<double>(shape.modulus()), -0.5 * static_cast<double>(shape.dim()));

  if (S.size() < shape.modulus()) {
    const auto w = twiddles(shape.modulus());
    std::vector<Complex> out(shape.size());
    for (Index x = 0; x < shape.size(); ++x) {
      Complex acc{};
      for (auto m : S.members()) acc += w[dot(x, m, shape)];
      out[x] = acc * norm;
    }
    return Signal(shape, std::move(out));
  }

  std::vector<Complex> ind(shape.size());
  for (auto m : S.members()) ind[m] = 1.0;
  return Signal(shape, transform(shape, ind, false));
}

Signal convolve(const Signal& f, const Signal& g) {
  if (!(f.shape() == g.shape())) throw ShapeError("convolve: shape mismatch");
  const auto& shape = f.shape();
  const std::size_t n = shape.size();
  std::vector<Index> neg(n);
  for (Index y = 0; y < n; ++y) neg[y] = shape.negate(y);

  std::vector<Complex> out(n);
  for (Index x = 0; x < n; ++x) {
    Complex acc{};
    for (Index y = 0; y < n; ++y) acc += f[y] * g[shape.add(x, neg[y])];
    out[x] = acc;
  }
  return Signal(shape, std::move(out));
}

FreqSet support(const Spectrum& F, double rel_tol) {
  double peak = 0.0;
  for (auto v : F.values()) peak = std::max(peak, std::abs(v));
  const double cutoff = rel_tol * std::max(1.0, peak);
  std::vector<Index> members;
  for (Index m = 0; m < F.size(); ++m) {
    if (std::abs(F[m]) > cutoff) members.push_back(m);
  }
  return FreqSet(F.shape(), std::move(members));
}

Signal as_signal(const Spectrum& F) { return Signal(F.shape(), {F.values().begin(), F.values().end()}); }

Spectrum as_spectrum(const Signal& f) { return Spectrum(f.shape(), {f.values().begin(), f.values().end()}); }

}  // namespace spectral
