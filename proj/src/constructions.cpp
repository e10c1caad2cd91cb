#include "spectral/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "spectral/errors.hpp"
#include "spectral/parallel.hpp"
#include "spectral/rng.hpp"

namespace spectral {

namespace {

double half_power(const GridShape& shape) {
  // N^{d/2}
  return std::pow(static_cast<double>(shape.modulus()), 0.5 * static_cast<double>(shape.dim()));
}

void require_nonempty(const FreqSet& S, const char* what) {
  if (S.empty()) throw DomainError(std::string(what) + ": empty set");
}

constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

}  // namespace

FreqSet random_set(const GridShape& shape, std::size_t size, std::uint64_t seed) {
  const Index n = shape.size();
  if (size < 1 || size > n) {
    throw DomainError("random_set: size " + std::to_string(size) + " outside [1, " + std::to_string(n) + "]");
  }
  Rng rng(seed);
  std::unordered_set<Index> chosen;
  chosen.reserve(size * 2);
  for (Index j = n - size; j < n; ++j) {
    const Index t = rng.uniform_index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return FreqSet(shape, std::vector<Index>(chosen.begin(), chosen.end()));
}

Signal random_signal_on(const FreqSet& S, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> F(S.shape().size());
  for (auto m : S.members()) F[m] = Complex(rng.normal(), rng.normal()) / std::numbers::sqrt2;
  return inverse(Spectrum(S.shape(), std::move(F)));
}

PhiStat phi(const FreqSet& S) {
  require_nonempty(S, "phi");
  const auto& shape = S.shape();
  const auto hat = indicator_spectrum(S);
  const double scale = half_power(shape);
  double best = 0.0;
  Index arg = shape.size() > 1 ? 1 : 0;
  for (Index m = 1; m < shape.size(); ++m) {
    const double v = std::abs(hat[m]) * scale;
    // Values equal up to rounding count as ties; the earlier index wins.
    if (v > best + 1e-9 * std::max(1.0, best)) {
      best = v;
      arg = m;
    }
  }
  return PhiStat{best, shape.decode(arg), S.size()};
}

double phi_tail_bound(const GridShape& shape, std::size_t size, double a) {
  const double log_bound = std::log(2.0 * static_cast<double>(shape.size())) + 2.0 - a * a / static_cast<double>(size);
  return std::min(1.0, std::exp(log_bound));
}

TailExperiment phi_tail_experiment(const GridShape& shape, std::size_t size, double a, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw DomainError("phi_tail_experiment: trials must be >= 1");
  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto S = random_set(shape, size, derive_seed(seed, t));
    hit[t] = phi(S).phi >= a ? 1 : 0;
  });
  TailExperiment out{};
  out.trials = trials;
  out.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  out.empirical = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.bound = phi_tail_bound(shape, size, a);
  out.allowance = out.bound + 3.0 * std::sqrt(out.bound * (1.0 - out.bound) / static_cast<double>(trials));
  out.holds = out.empirical <= out.allowance;
  return out;
}

Signal normalized_indicator_signal(const FreqSet& S) {
  require_nonempty(S, "normalized_indicator_signal");
  const auto hat = indicator_spectrum(S);
  const double scale = half_power(S.shape()) / static_cast<double>(S.size());
  std::vector<Complex> values(hat.values().begin(), hat.values().end());
  for (auto& v : values) v *= scale;
  return Signal(S.shape(), std::move(values));
}

BoundCheck sharpness_norm_bound(const FreqSet& S, Exponent p) {
  if (!p.is_finite()) throw DomainError("sharpness_norm_bound needs a finite exponent");
  require_nonempty(S, "sharpness_norm_bound");
  const double ratio = phi(S).phi / static_cast<double>(S.size());
  const double q = p.value();
  const double bound = std::pow(static_cast<double>(S.shape().size()) * std::pow(ratio, q) + 1.0, 1.0 / q);
  const double measured = lp_norm(normalized_indicator_signal(S), p);
  return BoundCheck{bound, measured, within_bound(measured, bound)};
}

SharpnessResult sample_sharpness_set(const GridShape& shape, std::size_t size, Exponent p, std::uint64_t seed,
                                     const SharpnessOptions& options) {
  if (!p.is_finite()) throw DomainError("sample_sharpness_set needs a finite exponent");
  SharpnessResult out{};
  out.phi_threshold = std::pow(static_cast<double>(size), 0.5 + options.eps);
  out.target = std::pow(2.0, 1.0 / p.value());
  for (std::size_t i = 0; i < options.max_draws; ++i) {
    auto S = random_set(shape, size, derive_seed(seed, i));
    const auto f = normalized_indicator_signal(S);
    out.draws = i + 1;
    out.phi = phi(S).phi;
    out.phi_certified = out.phi <= out.phi_threshold;
    out.norm_p = lp_norm(f, p);
    out.sup_norm = lp_norm(f, Exponent::infinity());
    const bool accept = options.rule == SharpnessRule::PhiCertificate ? out.phi_certified
                                                                      : within_bound(out.norm_p, out.target);
    if (accept) {
      out.found = true;
      out.set = std::move(S);
      return out;
    }
  }
  out.found = false;
  return out;
}

SubspacePair subspace_pair(const GridShape& shape, const SubspaceSpec& spec) {
  std::vector<bool> free(shape.dim(), false);
  for (auto a : spec.axes) {
    if (a >= shape.dim()) throw DomainError("subspace axis " + std::to_string(a) + " outside grid " + shape.to_string());
    if (free[a]) throw DomainError("subspace axis " + std::to_string(a) + " listed twice");
    free[a] = true;
  }
  std::vector<Index> h, perp;
  for (Index i = 0; i < shape.size(); ++i) {
    const auto p = shape.decode(i);
    bool in_h = true, in_perp = true;
    for (std::size_t j = 0; j < shape.dim(); ++j) {
      if (p.coords[j] == 0) continue;
      if (free[j]) {
        in_perp = false;
      } else {
        in_h = false;
      }
    }
    if (in_h) h.push_back(i);
    if (in_perp) perp.push_back(i);
  }
  const bool degenerate = spec.axes.empty() || spec.axes.size() == shape.dim();
  return SubspacePair{FreqSet(shape, std::move(h)), FreqSet(shape, std::move(perp)), degenerate};
}

std::vector<std::vector<double>> lambda_probes(std::size_t size, std::size_t trials, std::uint64_t seed) {
  if (size < 1 || trials < 1) throw DomainError("lambda_probes: size and trials must be positive");
  std::vector<std::vector<double>> probes(trials, std::vector<double>(size));
  const double flat = 1.0 / std::sqrt(static_cast<double>(size));
  std::fill(probes[0].begin(), probes[0].end(), flat);
  Rng rng(seed);
  for (std::size_t t = 1; t < trials; ++t) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& a : probes[t]) {
        a = rng.normal();
        norm2 += a * a;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : probes[t]) a *= inv;
  }
  return probes;
}

std::uint64_t lambda_probe_seed(std::uint64_t seed) { return derive_seed(seed, kProbeStream); }

double lambda_constant(const FreqSet& S, Exponent p, const std::vector<std::vector<double>>& probes) {
  require_nonempty(S, "lambda_constant");
  const auto& shape = S.shape();
  const std::size_t n = shape.size();
  const std::size_t k = S.size();
  std::vector<Complex> chars(k * n);
  for (std::size_t i = 0; i < k; ++i) {
    const Index m = S.members()[i];
    for (Index x = 0; x < n; ++x) chars[i * n + x] = unit_root(dot(x, m, shape), shape.modulus());
  }
  const double normalizer =
      p.is_finite() ? std::pow(static_cast<double>(n), -1.0 / p.value()) : 1.0;
  double best = 0.0;
  std::vector<Complex> g(n);
  for (const auto& a : probes) {
    if (a.size() != k) throw ShapeError("lambda_constant: probe length differs from set size");
    std::fill(g.begin(), g.end(), Complex{});
    double norm2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      norm2 += a[i] * a[i];
      const Complex* row = &chars[i * n];
      for (std::size_t x = 0; x < n; ++x) g[x] += a[i] * row[x];
    }
    if (norm2 == 0.0) continue;
    best = std::max(best, normalizer * lp_norm(g, p) / std::sqrt(norm2));
  }
  return best;
}

LambdaCandidate lambda_p_search(const GridShape& shape, std::size_t size, Exponent p, std::uint64_t seed,
                                const LambdaSearchOptions& options) {
  if (!p.is_finite() || p.value() <= 2.0) {
    throw DomainError("lambda_p_search needs 2 < p < inf (every set is Lambda(2)), got p = " + p.to_string());
  }
  if (size < 1 || size > shape.size()) throw DomainError("lambda_p_search: size out of range");
  if (options.budget < 1) throw DomainError("lambda_p_search: budget must be >= 1");
  const auto probes = lambda_probes(size, options.trials, lambda_probe_seed(seed));
  const std::size_t swaps = options.swaps ? options.swaps : 8 * size;

  struct Outcome {
    std::vector<Index> members;
    double constant = 0.0;
  };
  std::vector<Outcome> outcomes(options.budget);
  parallel_for(options.budget, options.threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    auto current = random_set(shape, size, rng.next());
    double best = lambda_constant(current, p, probes);
    if (size < shape.size()) {
      for (std::size_t s = 0; s < swaps; ++s) {
        std::vector<Index> members(current.members().begin(), current.members().end());
        const std::size_t out = rng.uniform_index(size);
        Index in;
        do {
          in = rng.uniform_index(shape.size());
        } while (current.contains(in));
        members[out] = in;
        FreqSet trial(shape, std::move(members));
        const double c = lambda_constant(trial, p, probes);
        if (c < best) {
          best = c;
          current = std::move(trial);
        }
      }
    }
    outcomes[r] = Outcome{{current.members().begin(), current.members().end()}, best};
  });

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].constant < outcomes[winner].constant) winner = r;
  }
  return LambdaCandidate{FreqSet(shape, std::move(outcomes[winner].members)), p, outcomes[winner].constant,
                         options.trials, seed};
}

double lambda_indicator_bound(const FreqSet& S, Exponent p, double C) {
  if (!p.is_finite() || p.value() <= 2.0) throw DomainError("lambda indicator bound needs 2 < p < inf");
  const auto& shape = S.shape();
  const double n = static_cast<double>(shape.modulus());
  const double d = static_cast<double>(shape.dim());
  return C * std::pow(n, d / p.value() - d / 2.0) * std::sqrt(static_cast<double>(S.size()));
}

bool lambda_indicator_check(const FreqSet& S, Exponent p, double C) {
  require_nonempty(S, "lambda_indicator_check");
  const double bound = lambda_indicator_bound(S, p, C);
  return within_bound(lp_norm(indicator_spectrum(S), p), bound);
}

}  // namespace spectral
