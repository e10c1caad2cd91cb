#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "spectral/fourier.hpp"

namespace spectral {

/// An L^p exponent p in [1, inf].
class Exponent {
 public:
  /// Throws DomainError for p < 1 or NaN. Pass +infinity for the sup norm.
  explicit Exponent(double p);

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }
  /// Accepts "inf", decimals, and fractions such as "4/3".
  static Exponent parse(std::string_view text);

  double value() const noexcept { return p_; }
  bool is_finite() const noexcept { return p_ != std::numeric_limits<double>::infinity(); }

  /// Hoelder conjugate p/(p-1); 1 <-> inf.
  Exponent dual() const;

  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  double p_;
};

/// Counting-measure norm (sum |f|^p)^{1/p}, or max |f| for p = inf.
double lp_norm(std::span<const Complex> values, Exponent p);
double lp_norm(std::span<const double> values, Exponent p);
inline double lp_norm(const Signal& f, Exponent p) { return lp_norm(f.values(), p); }

/// lhs <= rhs up to 1e-9 relative, or 1e-12 absolute when rhs < 1e-9.
bool within_bound(double lhs, double rhs);

enum class BoundKind {
  /// ||f||_inf <= sqrt(|S| / N^{2d/p}) ||f||_p
  SupportSize,
  /// ||f||_inf <= N^{-d/2} ||f||_p ||1^_S||_{p'}
  IndicatorDual,
};

std::string to_string(BoundKind kind);
/// Accepts "support-size", "indicator-dual" and the aliases "eq02", "eq03".
BoundKind parse_bound_kind(std::string_view text);

struct InequalityReport {
  BoundKind which;
  Exponent p;
  double lhs;          // ||f||_inf
  double rhs;          // bound value
  double slack_ratio;  // rhs / lhs, +inf when lhs == 0
  bool holds;
  GridShape grid;
  std::size_t set_size;
};

/// Measures the support-size bound for f with supp(f^) inside S.
///
/// The bound is only a theorem for p >= 2; for 1 <= p < 2 it is evaluated as
/// written and may fail (f = delta_0 with full S at p = 1 gives lhs = 1,
/// rhs = N^{-d/2}). Throws PreconditionError naming offending frequencies
/// when supp(f^) is not inside S, DomainError for p = inf.
InequalityReport verify_support_size_bound(const Signal& f, const FreqSet& S, Exponent p,
                                           double support_tol = kSupportTolerance);

/// Measures the indicator-dual bound; valid for every p in [1, inf].
InequalityReport verify_indicator_dual_bound(const Signal& f, const FreqSet& S, Exponent p,
                                             double support_tol = kSupportTolerance);

/// |S|^{1/2} N^{-d/p}: the support-size coefficient. Multiplied by a uniform
/// bound on ||f_N||_p it bounds ||f_N||_inf, and it tends to 0 as N grows
/// when |S| ~ N^alpha and p < 2d/alpha.
double vanishing_threshold(std::size_t set_size, const GridShape& shape, Exponent p);

struct BoundCheck {
  double bound;
  double measured;
  bool holds;
};

/// ||1^_S||_{p'} <= |S|^{1/2} N^{d/p' - d/2}, the Hoelder-plus-Plancherel
/// bound for p' <= 2. `p` is the primal exponent; throws DomainError when
/// p < 2 (then p' > 2 and the Hoelder step reverses).
BoundCheck indicator_dual_norm_bound(const FreqSet& S, Exponent p);

}  // namespace spectral
