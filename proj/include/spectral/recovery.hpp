#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectral/fourier.hpp"
#include "spectral/inequalities.hpp"

namespace spectral {

/// A spectrum with some entries withheld. Hidden entries hold 0.
struct MaskedSpectrum {
  Spectrum observed;
  FreqSet hidden;
};

MaskedSpectrum mask_spectrum(const Spectrum& F, const FreqSet& S);

/// Restores the hidden entries from `truth`; off the hidden set the masked
/// values are kept.
Spectrum unmask(const MaskedSpectrum& masked, const Spectrum& truth);

/// A real signal to be recovered from its spectrum off `hidden` by
/// minimizing ||g||_p.
///
/// The hidden set is closed under negation at construction (real signals
/// have conjugate-symmetric spectra); a warning is recorded when that grows
/// it. c_size = |S| / N^k with k = 2d/p; a supplied value must agree to 1e-9
/// relative or DataError is thrown.
class RecoveryProblem {
 public:
  RecoveryProblem(Spectrum observed, FreqSet hidden, Exponent p, double delta,
                  std::optional<double> c_size = std::nullopt, std::vector<double> alphabet = {});

  const GridShape& shape() const noexcept { return observed_.shape(); }
  const Spectrum& observed() const noexcept { return observed_; }
  const FreqSet& hidden() const noexcept { return hidden_; }
  Exponent p() const noexcept { return p_; }
  double delta() const noexcept { return delta_; }
  double c_size() const noexcept { return c_size_; }
  /// k = 2d/p.
  double k() const;
  /// delta / (2 sqrt(c_size)).
  double threshold() const;
  /// Declared value alphabet (sorted, distinct); empty when none.
  const std::vector<double>& alphabet() const noexcept { return alphabet_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Spectrum observed_;
  FreqSet hidden_;
  Exponent p_;
  double delta_;
  double c_size_;
  std::vector<double> alphabet_;
  std::vector<std::string> warnings_;
};

/// The affine set of real signals consistent with the observed data,
/// parameterized by the real and imaginary parts of the hidden coefficients:
/// g(c) = g0 + sum_j c_j b_j. For a pair {m, -m} the unknowns are Re and Im
/// of g^(m); for a self-conjugate m (2m = 0) only the real part is free.
///
/// Throws UnrecoverableError when every frequency is hidden and DataError
/// when the observed part is not conjugate-symmetric.
class FeasibleSet {
 public:
  explicit FeasibleSet(const RecoveryProblem& problem);

  std::size_t dimension() const noexcept { return unknowns_.size(); }
  std::vector<double> signal_at(std::span<const double> c) const;
  /// Full spectrum of g(c).
  Spectrum spectrum_at(std::span<const double> c) const;
  /// sum_x |g(c)(x)|^p for the problem's exponent.
  double objective(std::span<const double> c) const;
  std::vector<double> gradient(std::span<const double> c) const;

 private:
  struct Unknown {
    Index frequency;
    bool imaginary;
    bool self_conjugate;
  };

  GridShape shape_;
  Spectrum base_spectrum_;
  double p_;
  std::vector<Unknown> unknowns_;
  std::vector<double> base_;   // g0
  std::vector<double> basis_;  // dimension() rows of N^d
};

struct Certificate {
  double threshold;
  double norm_at_solution;
  bool unique;
};

struct RecoveryResult {
  Signal signal;
  double objective;             // ||signal||_p
  double continuous_objective;  // ||g||_p at the continuous minimizer
  Certificate certificate;
  std::size_t iterations;
  bool converged;
  bool snapped;  // signal was replaced by a feasible alphabet-valued candidate
};

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iters = 50000;
  /// Cap on candidates examined when nearest-value snapping is infeasible.
  std::size_t snap_budget = 1u << 20;
};

/// Minimizes ||g||_p over the feasible set.
///
/// p >= 2: first-order descent (Barzilai-Borwein steps, Armijo backtracking)
/// until ||grad|| <= tol * max(1, objective). 1 <= p < 2: iteratively
/// reweighted least squares with smoothing continuation. When the problem
/// declares an alphabet the minimizer is snapped to a feasible
/// alphabet-valued candidate. The certificate reports unique only for p >= 2
/// (the support-size bound fails below 2) and ||signal||_p < threshold.
RecoveryResult recover(const RecoveryProblem& problem, const SolverOptions& options = {});

/// True iff `signal` is real and its spectrum matches the observed data off
/// the hidden set within tol * max(1, ||observed||_inf).
bool is_feasible(const RecoveryProblem& problem, const Signal& signal, double tol = 1e-7);

struct BruteForceResult {
  std::optional<Signal> signal;  // minimal-norm feasible candidate
  double norm;
  std::size_t feasible;
  std::size_t enumerated;
  bool ambiguous;  // another feasible candidate ties the minimum within 1e-9
};

/// Enumerates every alphabet-valued signal. Throws BudgetError when
/// |alphabet|^{N^d} exceeds `budget`.
BruteForceResult brute_force_recover(const RecoveryProblem& problem, std::span<const double> alphabet,
                                     std::size_t budget = 10'000'000);

/// norm < delta / (2 sqrt(c_size)).
bool uniqueness_certificate(double norm, double delta, double c_size);

/// True iff f is non-constant and distinct values differ by at least delta.
/// Values within 1e-9 count as equal. Throws DomainError for complex input.
bool separation_check(const Signal& f, double delta);

struct RecoveryInstance {
  Signal truth;
  RecoveryProblem problem;
};

/// Random alphabet-valued instance with a symmetric hidden set of exactly
/// `hidden_size` elements, delta = smallest alphabet gap. With
/// `require_certificate`, draws are rejected until p >= 2 and the truth
/// satisfies the uniqueness threshold; returns nullopt after `max_draws`.
std::optional<RecoveryInstance> make_instance(const GridShape& shape, std::span<const double> alphabet,
                                              std::size_t hidden_size, Exponent p, std::uint64_t seed,
                                              bool require_certificate, std::size_t max_draws = 2000);

}  // namespace spectral
