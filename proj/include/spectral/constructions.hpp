#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spectral/fourier.hpp"
#include "spectral/inequalities.hpp"

namespace spectral {

/// Uniformly random subset of Z_N^d of the given size (Floyd's sampler),
/// fully determined by `seed`. Throws DomainError unless 1 <= size <= N^d.
FreqSet random_set(const GridShape& shape, std::size_t size, std::uint64_t seed);

/// Random signal whose spectrum is supported in S: standard complex Gaussian
/// coefficients on S, zero elsewhere.
Signal random_signal_on(const FreqSet& S, std::uint64_t seed);

// --- largest nontrivial exponential sum ----------------------------------

struct PhiStat {
  /// max over m != 0 of |sum_{x in S} e^{-2 pi i x.m/N}|, i.e. N^{d/2} |1^_S(m)|.
  double phi;
  /// A maximizing frequency; smallest linear index among ties.
  GridPoint arg_max;
  std::size_t set_size;
};

PhiStat phi(const FreqSet& S);

/// min(1, 2 N^d e^2 e^{-a^2/|S|}): tail bound for phi of a uniformly random
/// set of fixed size.
double phi_tail_bound(const GridShape& shape, std::size_t size, double a);

struct TailExperiment {
  std::size_t trials;
  std::size_t hits;  // draws with phi >= a
  double empirical;  // hits / trials
  double bound;      // phi_tail_bound
  double allowance;  // bound + 3 sqrt(bound (1 - bound) / trials)
  bool holds;        // empirical <= allowance
};

/// Monte-Carlo estimate of P(phi(S) >= a) over `trials` random sets. Trial t
/// draws from stream t of `seed`, so results do not depend on `threads`.
TailExperiment phi_tail_experiment(const GridShape& shape, std::size_t size, double a, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

// --- normalized indicator family ------------------------------------------

/// f = (N^{d/2} / |S|) 1^_S. Satisfies f(0) = 1, ||f||_inf = 1 and f^ = 1_{-S}
/// scaled, so supp(f^) = -S.
Signal normalized_indicator_signal(const FreqSet& S);

/// (N^d (phi(S)/|S|)^p + 1)^{1/p} against the measured L^p norm of
/// normalized_indicator_signal(S). Needs finite p.
BoundCheck sharpness_norm_bound(const FreqSet& S, Exponent p);

enum class SharpnessRule {
  /// Accept when phi(S) <= |S|^{1/2 + eps}; the analytic route.
  PhiCertificate,
  /// Accept when the measured ||f||_p <= 2^{1/p}.
  MeasuredNorm,
};

struct SharpnessOptions {
  double eps = 0.1;
  std::size_t max_draws = 10000;
  SharpnessRule rule = SharpnessRule::PhiCertificate;
};

struct SharpnessResult {
  bool found;
  std::size_t draws;
  std::optional<FreqSet> set;  // the accepted set, when found
  double phi;                  // of the accepted (or last) draw
  double phi_threshold;        // |S|^{1/2 + eps}
  bool phi_certified;          // phi <= phi_threshold
  double norm_p;               // ||f||_p of the normalized indicator signal
  double target;               // 2^{1/p}
  double sup_norm;             // ||f||_inf
};

/// Rejection sampling of random sets for a uniformly L^p-bounded family whose
/// sup norm stays at 1. Draw i uses stream i of `seed`.
SharpnessResult sample_sharpness_set(const GridShape& shape, std::size_t size, Exponent p, std::uint64_t seed,
                                     const SharpnessOptions& options = {});

// --- coordinate subgroups -------------------------------------------------

/// Free coordinates (0-based) of a coordinate subgroup H.
struct SubspaceSpec {
  std::vector<std::size_t> axes;
};

struct SubspacePair {
  FreqSet subspace;      // H = {x : x_j = 0 for j not in axes}
  FreqSet annihilator;   // H^perp = {m : m_j = 0 for j in axes}
  bool degenerate;       // K == 0 or K == d
};

/// Builds H and H^perp. |H| = N^K, |H^perp| = N^{d-K}, and 1^_H equals
/// N^{K - d/2} on H^perp and 0 elsewhere.
SubspacePair subspace_pair(const GridShape& shape, const SubspaceSpec& spec);

// --- Lambda(p) search -----------------------------------------------------

struct LambdaCandidate {
  FreqSet set;
  Exponent p;
  double empirical_constant;
  std::size_t trials;
  std::uint64_t seed;
};

struct LambdaSearchOptions {
  std::size_t budget = 8;          // random restarts
  std::size_t trials = 64;         // coefficient probes
  std::size_t swaps = 0;           // swap attempts per restart; 0 means 8 * size
  unsigned threads = 1;
};

/// Unit-norm coefficient probes: probe 0 is flat (1/sqrt(size) each), the
/// rest are normalized standard Gaussians from `seed`.
std::vector<std::vector<double>> lambda_probes(std::size_t size, std::size_t trials, std::uint64_t seed);

/// Seed of the probe set lambda_p_search uses for a run seeded with `seed`.
std::uint64_t lambda_probe_seed(std::uint64_t seed);

/// max over probes a of N^{-d/p} ||sum_i a_i e_{m_i}||_p / ||a||_2, with the
/// N^{-d/p} factor converting to the normalized (probability) measure.
double lambda_constant(const FreqSet& S, Exponent p, const std::vector<std::vector<double>>& probes);

/// Random restarts plus greedy single-swap descent on lambda_constant.
/// Restart r uses stream r of `seed`; probes are shared across restarts.
/// Throws DomainError for p <= 2 or p = inf.
LambdaCandidate lambda_p_search(const GridShape& shape, std::size_t size, Exponent p, std::uint64_t seed,
                                const LambdaSearchOptions& options = {});

/// C N^{d/p} N^{-d/2} |S|^{1/2}.
double lambda_indicator_bound(const FreqSet& S, Exponent p, double C);

/// ||1^_S||_p <= C N^{d/p} N^{-d/2} |S|^{1/2}. Needs 2 < p < inf.
bool lambda_indicator_check(const FreqSet& S, Exponent p, double C);

}  // namespace spectral
