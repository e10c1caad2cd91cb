#include "spectral/inequalities.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectral/errors.hpp"

namespace spectral {

Exponent::Exponent(double p) : p_(p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("exponent must lie in [1, inf], got " + std::to_string(p));
}

namespace {

double parse_double(std::string_view text) {
  double v = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_double(text.substr(0, slash));
    const double den = parse_double(text.substr(slash + 1));
    if (den == 0.0) throw DomainError("zero denominator in exponent '" + std::string(text) + "'");
    return Exponent(num / den);
  }
  return Exponent(parse_double(text));
}

Exponent Exponent::dual() const {
  if (!is_finite()) return Exponent(1.0);
  if (p_ == 1.0) return infinity();
  return Exponent(p_ / (p_ - 1.0));
}

std::string Exponent::to_string() const {
  if (!is_finite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

namespace {

template <class T>
double lp_norm_impl(std::span<const T> values, Exponent p) {
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (!p.is_finite() || peak == 0.0) return peak;
  const double q = p.value();
  double acc = 0.0;
  if (q == 1.0) {
    for (const auto& v : values) acc += std::abs(v);
    return acc;
  }
  if (q == 2.0) {
    for (const auto& v : values) {
      const double r = std::abs(v) / peak;
      acc += r * r;
    }
    return peak * std::sqrt(acc);
  }
  for (const auto& v : values) acc += std::pow(std::abs(v) / peak, q);
  return peak * std::pow(acc, 1.0 / q);
}

double sup_norm(const Signal& f) { return lp_norm(f, Exponent::infinity()); }

void require_support(const Signal& f, const FreqSet& S, double tol) {
  if (!(f.shape() == S.shape())) throw ShapeError("signal and set live on different grids");
  const auto supp = support(forward(f), tol);
  std::vector<Index> offending;
  for (auto m : supp.members()) {
    if (!S.contains(m)) {
      offending.push_back(m);
      if (offending.size() == 8) break;
    }
  }
  if (!offending.empty()) {
    std::string msg = "spectrum of f is not supported in S; offending frequencies:";
    for (auto m : offending) msg += " " + std::to_string(m);
    throw PreconditionError(msg, std::move(offending));
  }
}

InequalityReport make_report(BoundKind which, Exponent p, double lhs, double rhs, const FreqSet& S) {
  const double slack = lhs == 0.0 ? std::numeric_limits<double>::infinity() : rhs / lhs;
  return InequalityReport{which, p, lhs, rhs, slack, within_bound(lhs, rhs), S.shape(), S.size()};
}

}  // namespace

double lp_norm(std::span<const Complex> values, Exponent p) { return lp_norm_impl(values, p); }

double lp_norm(std::span<const double> values, Exponent p) { return lp_norm_impl(values, p); }

bool within_bound(double lhs, double rhs) {
  const double tol = rhs < 1e-9 ? 1e-12 : 1e-9 * rhs;
  return lhs <= rhs + tol;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::SupportSize:
      return "support-size";
    case BoundKind::IndicatorDual:
      return "indicator-dual";
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view text) {
  if (text == "support-size" || text == "eq02") return BoundKind::SupportSize;
  if (text == "indicator-dual" || text == "eq03") return BoundKind::IndicatorDual;
  throw DomainError("unknown bound '" + std::string(text) + "' (expected support-size or indicator-dual)");
}

InequalityReport verify_support_size_bound(const Signal& f, const FreqSet& S, Exponent p, double support_tol) {
  if (!p.is_finite()) throw DomainError("support-size bound needs a finite exponent");
  require_support(f, S, support_tol);
  const auto& g = f.shape();
  const double n = static_cast<double>(g.modulus());
  const double d = static_cast<double>(g.dim());
  // sqrt(|S| / N^{2d/p}) computed in log space to stay finite on big grids.
  const double coeff = std::exp(0.5 * std::log(static_cast<double>(S.size())) - d / p.value() * std::log(n));
  return make_report(BoundKind::SupportSize, p, sup_norm(f), coeff * lp_norm(f, p), S);
}

InequalityReport verify_indicator_dual_bound(const Signal& f, const FreqSet& S, Exponent p, double support_tol) {
  require_support(f, S, support_tol);
  const auto& g = f.shape();
  const double scale = std::pow(static_cast<double>(g.modulus()), -0.5 * static_cast<double>(g.dim()));
  const double rhs = scale * lp_norm(f, p) * lp_norm(indicator_spectrum(S), p.dual());
  return make_report(BoundKind::IndicatorDual, p, sup_norm(f), rhs, S);
}

double vanishing_threshold(std::size_t set_size, const GridShape& shape, Exponent p) {
  if (!p.is_finite()) throw DomainError("vanishing threshold needs a finite exponent");
  const double n = static_cast<double>(shape.modulus());
  const double d = static_cast<double>(shape.dim());
  return std::sqrt(static_cast<double>(set_size)) * std::pow(n, -d / p.value());
}

BoundCheck indicator_dual_norm_bound(const FreqSet& S, Exponent p) {
  if (p.value() < 2.0) throw DomainError("dual-norm bound needs p >= 2 (p' <= 2), got p = " + p.to_string());
  const Exponent q = p.dual();
  const auto& g = S.shape();
  const double n = static_cast<double>(g.modulus());
  const double d = static_cast<double>(g.dim());
  const double inv_q = q.is_finite() ? 1.0 / q.value() : 0.0;
  const double bound = std::sqrt(static_cast<double>(S.size())) * std::pow(n, d * inv_q - d / 2.0);
  const double measured = lp_norm(indicator_spectrum(S), q);
  return BoundCheck{bound, measured, within_bound(measured, bound)};
}

}  // namespace spectral
