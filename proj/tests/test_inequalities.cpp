#include <doctest.h>

#include <tuple>

#include <cmath>

#include "oracles.hpp"
#include "spectral/constructions.hpp"
#include "spectral/errors.hpp"
#include "spectral/inequalities.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

Signal delta0(const GridShape& g) {
  std::vector<Complex> v(g.size());
  v[0] = 1.0;
  return Signal(g, std::move(v));
}

std::vector<Complex> vec(std::span<const Complex> s) { return {s.begin(), s.end()}; }

// H = first coordinate free, others zero.
FreqSet line_subgroup(const GridShape& g) { return subspace_pair(g, SubspaceSpec{{0}}).subspace; }

}  // namespace

TEST_CASE("exponents") {
  CHECK(Exponent(2).dual().value() == doctest::Approx(2.0));
  CHECK(!Exponent(1).dual().is_finite());
  CHECK(Exponent::infinity().dual().value() == 1.0);
  for (double p : {1.0, 1.5, 2.0, 3.0}) CHECK(Exponent(p).dual().dual().value() == doctest::Approx(p));
  CHECK(!Exponent::infinity().dual().dual().is_finite());
  CHECK(Exponent::parse("4/3").value() == doctest::Approx(4.0 / 3.0));
  CHECK(!Exponent::parse("inf").is_finite());
  CHECK_THROWS_AS(Exponent(0.5), DomainError);
  CHECK_THROWS_AS(Exponent(NAN), DomainError);
  CHECK_THROWS_AS(Exponent::parse("abc"), DomainError);
  CHECK_THROWS_AS(Exponent::parse("1/0"), DomainError);
}

TEST_CASE("lp norms") {
  GridShape g(5, 2);
  for (double p : {1.0, 2.0, 3.5, double(INFINITY)}) CHECK(lp_norm(delta0(g), Exponent(p)) == doctest::Approx(1.0));
  const Signal ones(g, std::vector<Complex>(g.size(), 1.0));
  for (double p : {1.0, 2.0, 3.0}) CHECK(lp_norm(ones, Exponent(p)) == doctest::Approx(std::pow(25.0, 1.0 / p)));
  CHECK(lp_norm(ones, Exponent::infinity()) == 1.0);

  GridShape g9(9, 1);
  Rng rng(3);
  std::vector<Complex> v(9);
  for (auto& x : v) x = Complex(rng.normal(), rng.normal());
  const double want = oracle::lp(v, 3.0);
  CHECK(std::abs(lp_norm(Signal(g9, v), Exponent(3)) - want) <= 1e-12 * want);
}

TEST_CASE("within_bound tolerances") {
  CHECK(within_bound(1.0 + 5e-10, 1.0));
  CHECK_FALSE(within_bound(1.0 + 2e-9, 1.0));
  CHECK(within_bound(5e-13, 0.0));
  CHECK_FALSE(within_bound(2e-12, 0.0));
}

TEST_CASE("support-size bound examples") {
  GridShape g(8, 1);
  const auto r = verify_support_size_bound(delta0(g), FreqSet::full(g), Exponent(2));
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0));
  CHECK(r.holds);
  CHECK(r.which == BoundKind::SupportSize);

  // f = 1^_H on Z_4^2 has spectrum 1_H, so the admissible S is H itself.
  GridShape g2(4, 2);
  const auto pair = subspace_pair(g2, SubspaceSpec{{0}});
  const auto f = indicator_spectrum(pair.subspace);
  const auto rh = verify_support_size_bound(f, pair.subspace, Exponent(2));
  CHECK(rh.lhs == doctest::Approx(1.0));
  CHECK(rh.rhs == doctest::Approx(1.0));  // sqrt(4/16) * ||f||_2 = 0.5 * 2
  CHECK(rh.slack_ratio == doctest::Approx(1.0));

  try {
    verify_support_size_bound(f, pair.annihilator, Exponent(2));
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.offending() == std::vector<std::uint64_t>{4, 8, 12});
  }
  CHECK_THROWS_AS(verify_support_size_bound(f, pair.subspace, Exponent::infinity()), DomainError);
}

TEST_CASE("support-size bound fails below p = 2") {
  // The Hoelder step needs p >= 2; a point mass with full S breaks it.
  GridShape g(8, 1);
  const auto r = verify_support_size_bound(delta0(g), FreqSet::full(g), Exponent(1));
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(std::pow(8.0, -0.5)));
  CHECK_FALSE(r.holds);
}

TEST_CASE("zero signal has infinite slack") {
  GridShape g(4, 1);
  const auto r = verify_indicator_dual_bound(Signal::zeros(g), FreqSet(g, {1}), Exponent(2));
  CHECK(r.lhs == 0.0);
  CHECK(std::isinf(r.slack_ratio));
  CHECK(r.holds);
}

TEST_CASE("random sweeps: both bounds hold with p >= 2 and the dual bound for all p") {
  Rng rng(2024);
  const std::vector<std::pair<std::uint64_t, std::size_t>> grids{{8, 1}, {13, 1}, {32, 1}, {4, 2}, {6, 2}, {3, 3}};
  int support_checked = 0;
  for (int t = 0; t < 500; ++t) {
    const auto [n, d] = grids[rng.uniform_index(grids.size())];
    GridShape g(n, d);
    const auto S = random_set(g, 1 + rng.uniform_index(g.size()), rng.next());
    const auto f = random_signal_on(S, rng.next());
    const double ps[] = {1.0, 1.5, 2.0, 3.0, 6.0, INFINITY};
    const Exponent p(ps[rng.uniform_index(6)]);
    const auto dual = verify_indicator_dual_bound(f, S, p);
    CHECK(dual.slack_ratio >= 1.0 - 1e-9);
    if (p.is_finite() && p.value() >= 2.0) {
      CHECK(verify_support_size_bound(f, S, p).slack_ratio >= 1.0 - 1e-9);
      ++support_checked;
    }
  }
  CHECK(support_checked > 100);
}

TEST_CASE("dual bound is an equality on coordinate subgroups") {
  for (std::uint64_t n : {4u, 8u, 9u}) {
    for (std::size_t d : {2u, 3u}) {
      GridShape g(n, d);
      for (std::size_t k = 1; k < d; ++k) {
        std::vector<std::size_t> axes(k);
        for (std::size_t j = 0; j < k; ++j) axes[j] = j;
        const auto H = subspace_pair(g, SubspaceSpec{axes}).subspace;
        const auto f = indicator_spectrum(H);
        for (const char* p : {"1", "4/3", "2", "4", "inf"}) {
          const auto r = verify_indicator_dual_bound(f, H, Exponent::parse(p));
          CHECK(std::abs(r.lhs - r.rhs) <= 1e-9 * r.rhs);
        }
      }
    }
  }
}

TEST_CASE("dual bound with a single frequency") {
  GridShape g(6, 2);
  std::vector<Complex> F(g.size());
  F[0] = 1.0;
  const auto f = inverse(Spectrum(g, F));
  const auto r = verify_indicator_dual_bound(f, FreqSet(g, {0}), Exponent(2));
  CHECK(r.lhs == doctest::Approx(1.0 / 6.0));
  CHECK(r.holds);
}

TEST_CASE("uncertainty equality for subgroups") {
  using Case = std::tuple<std::uint64_t, std::size_t, std::size_t>;
  for (auto [n, d, k] : {Case{4, 2, 1}, Case{3, 3, 2}, Case{5, 3, 1}}) {
    GridShape g(n, d);
    std::vector<std::size_t> axes(k);
    for (std::size_t j = 0; j < k; ++j) axes[j] = j;
    const auto H = subspace_pair(g, SubspaceSpec{axes}).subspace;
    const auto supp = support(as_spectrum(indicator_spectrum(H)));
    CHECK(supp.size() * H.size() == g.size());
  }
}

TEST_CASE("vanishing threshold") {
  GridShape g16(16, 1);
  CHECK(vanishing_threshold(4, g16, Exponent(4)) == doctest::Approx(1.0));
  CHECK(vanishing_threshold(4, g16, Exponent(2)) == doctest::Approx(0.5));
  // alpha = 1/2, d = 1: decays for p < 4.
  double prev = INFINITY;
  for (std::uint64_t n : {8u, 16u, 32u, 64u}) {
    const auto size = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double t = vanishing_threshold(size, GridShape(n, 1), Exponent(3));
    CHECK(t < prev);
    prev = t;
  }
  CHECK_THROWS_AS(vanishing_threshold(4, g16, Exponent::infinity()), DomainError);
}

TEST_CASE("dual-norm bound") {
  GridShape g8(8, 1);
  const auto one = indicator_dual_norm_bound(FreqSet(g8, {0}), Exponent(2));
  CHECK(one.bound == doctest::Approx(1.0));
  CHECK(one.measured == doctest::Approx(1.0));
  const auto full = indicator_dual_norm_bound(FreqSet::full(g8), Exponent::infinity());
  CHECK(full.bound == doctest::Approx(8.0));
  CHECK(full.measured == doctest::Approx(std::sqrt(8.0)));
  CHECK(full.holds);

  GridShape g(4, 2);
  for (std::uint64_t s = 0; s < 200; ++s) {
    CHECK(indicator_dual_norm_bound(random_set(g, 4, s), Exponent(4)).holds);
  }
  CHECK_THROWS_AS(indicator_dual_norm_bound(FreqSet(g8, {0}), Exponent(1.5)), DomainError);
}

TEST_CASE("Hoelder nesting chain") {
  Rng rng(9);
  GridShape g(7, 2);
  for (int t = 0; t < 50; ++t) {
    std::vector<Complex> v(g.size());
    for (auto& x : v) x = Complex(rng.normal(), rng.normal());
    const Signal f(g, v);
    const double l2 = lp_norm(f, Exponent(2));
    for (double p : {2.0, 3.0, 6.0}) {
      const double rhs = std::pow(49.0, 0.5 - 1.0 / p) * lp_norm(f, Exponent(p));
      CHECK(l2 <= rhs * (1 + 1e-10));
    }
    for (double p : {1.0, 1.5}) CHECK(l2 <= lp_norm(f, Exponent(p)) * (1 + 1e-10));
  }
}

TEST_CASE("bound names") {
  CHECK(parse_bound_kind("eq02") == BoundKind::SupportSize);
  CHECK(parse_bound_kind("indicator-dual") == BoundKind::IndicatorDual);
  CHECK(to_string(BoundKind::SupportSize) == "support-size");
  CHECK_THROWS_AS(parse_bound_kind("eq99"), DomainError);
}
