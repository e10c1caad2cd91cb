#include "spectral/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spectral/constructions.hpp"
#include "spectral/errors.hpp"
#include "spectral/rng.hpp"

namespace spectral {

namespace {

double peak_modulus(std::span<const Complex> values) {
  double peak = 0.0;
  for (auto v : values) peak = std::max(peak, std::abs(v));
  return peak;
}

std::vector<double> sorted_alphabet(std::span<const double> alphabet) {
  std::vector<double> out(alphabet.begin(), alphabet.end());
  for (auto a : out) {
    if (!std::isfinite(a)) throw DomainError("alphabet values must be finite");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FreqSet symmetrize(const FreqSet& S) {
  std::vector<Index> members(S.members().begin(), S.members().end());
  for (auto m : S.members()) members.push_back(S.shape().negate(m));
  return FreqSet(S.shape(), std::move(members));
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

MaskedSpectrum mask_spectrum(const Spectrum& F, const FreqSet& S) {
  if (!(F.shape() == S.shape())) throw ShapeError("mask_spectrum: grid mismatch");
  std::vector<Complex> values(F.values().begin(), F.values().end());
  for (auto m : S.members()) values[m] = Complex{};
  return MaskedSpectrum{Spectrum(F.shape(), std::move(values)), S};
}

Spectrum unmask(const MaskedSpectrum& masked, const Spectrum& truth) {
  if (!(masked.observed.shape() == truth.shape())) throw ShapeError("unmask: grid mismatch");
  std::vector<Complex> values(masked.observed.values().begin(), masked.observed.values().end());
  for (auto m : masked.hidden.members()) values[m] = truth[m];
  return Spectrum(truth.shape(), std::move(values));
}

RecoveryProblem::RecoveryProblem(Spectrum observed, FreqSet hidden, Exponent p, double delta,
                                 std::optional<double> c_size, std::vector<double> alphabet)
    : observed_(std::move(observed)),
      hidden_(symmetrize(hidden)),
      p_(p),
      delta_(delta),
      c_size_(0.0),
      alphabet_(sorted_alphabet(alphabet)) {
  if (!(observed_.shape() == hidden.shape())) throw ShapeError("recovery problem: grid mismatch");
  if (!p_.is_finite()) throw DomainError("recovery needs a finite exponent");
  if (hidden.empty()) throw DomainError("recovery problem: hidden set is empty");
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw DomainError("recovery problem: delta must be positive");
  if (hidden_.size() != hidden.size()) {
    warnings_.push_back("hidden set closed under negation: " + std::to_string(hidden.size()) + " -> " +
                        std::to_string(hidden_.size()) + " frequencies");
  }
  // |S| = c_size N^k with N^k = N^{2d/p}.
  const double nk = std::pow(static_cast<double>(shape().modulus()), k());
  const double implied = static_cast<double>(hidden_.size()) / nk;
  if (c_size) {
    if (!(std::abs(*c_size - implied) <= 1e-9 * implied)) {
      throw DataError("c_size " + std::to_string(*c_size) + " inconsistent with |S| / N^k = " + std::to_string(implied));
    }
  }
  c_size_ = implied;
}

double RecoveryProblem::k() const { return 2.0 * static_cast<double>(shape().dim()) / p_.value(); }

double RecoveryProblem::threshold() const { return delta_ / (2.0 * std::sqrt(c_size_)); }

FeasibleSet::FeasibleSet(const RecoveryProblem& problem)
    : shape_(problem.shape()), base_spectrum_(problem.observed()), p_(problem.p().value()) {
  const auto& hidden = problem.hidden();
  const auto& observed = problem.observed();
  const Index n = shape_.size();
  if (hidden.size() == n) throw UnrecoverableError("every frequency is hidden; nothing constrains the signal");

  const double tol = 1e-9 * std::max(1.0, peak_modulus(observed.values()));
  for (Index m = 0; m < n; ++m) {
    if (hidden.contains(m)) continue;
    const Index partner = shape_.negate(m);
    if (std::abs(observed[partner] - std::conj(observed[m])) > tol) {
      throw DataError("observed spectrum is not conjugate-symmetric at frequency " + std::to_string(m) +
                      "; no real signal matches it");
    }
  }

  std::vector<Complex> base(observed.values().begin(), observed.values().end());
  for (auto m : hidden.members()) base[m] = Complex{};
  base_spectrum_ = Spectrum(shape_, std::move(base));
  const auto g0 = inverse(base_spectrum_);
  base_.resize(n);
  for (Index x = 0; x < n; ++x) base_[x] = g0[x].real();

  for (auto m : hidden.members()) {
    const Index partner = shape_.negate(m);
    if (partner == m) {
      unknowns_.push_back({m, false, true});
    } else if (m < partner) {
      unknowns_.push_back({m, false, false});
      unknowns_.push_back({m, true, false});
    }
  }

  const double scale = std::pow(static_cast<double>(shape_.modulus()), -0.5 * static_cast<double>(shape_.dim()));
  basis_.resize(unknowns_.size() * n);
  for (std::size_t j = 0; j < unknowns_.size(); ++j) {
    const auto& u = unknowns_[j];
    for (Index x = 0; x < n; ++x) {
      // unit_root gives e^{-i theta}; the inverse transform uses e^{+i theta}.
      const Complex e = unit_root(spectral::dot(x, u.frequency, shape_), shape_.modulus());
      double v;
      if (u.self_conjugate) {
        v = scale * e.real();
      } else if (u.imaginary) {
        v = 2.0 * scale * e.imag();  // -2 sin(theta) = 2 Im(e^{-i theta})
      } else {
        v = 2.0 * scale * e.real();
      }
      basis_[j * n + x] = v;
    }
  }
}

std::vector<double> FeasibleSet::signal_at(std::span<const double> c) const {
  if (c.size() != dimension()) throw ShapeError("coefficient vector has wrong length");
  std::vector<double> g = base_;
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    const double* row = &basis_[j * n];
    for (std::size_t x = 0; x < n; ++x) g[x] += c[j] * row[x];
  }
  return g;
}

Spectrum FeasibleSet::spectrum_at(std::span<const double> c) const {
  if (c.size() != dimension()) throw ShapeError("coefficient vector has wrong length");
  std::vector<Complex> F(base_spectrum_.values().begin(), base_spectrum_.values().end());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto& u = unknowns_[j];
    if (u.self_conjugate) {
      F[u.frequency] += c[j];
      continue;
    }
    const Index partner = shape_.negate(u.frequency);
    if (u.imaginary) {
      F[u.frequency] += Complex(0.0, c[j]);
      F[partner] -= Complex(0.0, c[j]);
    } else {
      F[u.frequency] += c[j];
      F[partner] += c[j];
    }
  }
  return Spectrum(shape_, std::move(F));
}

double FeasibleSet::objective(std::span<const double> c) const {
  const auto g = signal_at(c);
  double acc = 0.0;
  if (p_ == 2.0) {
    for (auto v : g) acc += v * v;
  } else {
    for (auto v : g) acc += std::pow(std::abs(v), p_);
  }
  return acc;
}

std::vector<double> FeasibleSet::gradient(std::span<const double> c) const {
  const auto g = signal_at(c);
  const std::size_t n = g.size();
  std::vector<double> w(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double a = std::abs(g[x]);
    const double mag = p_ == 2.0 ? a : std::pow(a, p_ - 1.0);
    w[x] = p_ * mag * (g[x] > 0.0 ? 1.0 : (g[x] < 0.0 ? -1.0 : 0.0));
  }
  std::vector<double> out(dimension());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = dot(std::span<const double>(&basis_[j * n], n), w);
  }
  return out;
}

namespace {

struct Continuous {
  std::vector<double> c;
  std::size_t iterations = 0;
  bool converged = false;
};

Continuous descend(const FeasibleSet& fs, const SolverOptions& opt) {
  Continuous out;
  out.c.assign(fs.dimension(), 0.0);
  if (fs.dimension() == 0) {
    out.converged = true;
    return out;
  }
  auto& c = out.c;
  double F = fs.objective(c);
  auto g = fs.gradient(c);
  double gn = std::sqrt(dot(g, g));
  double alpha = 1.0 / std::max(1.0, gn);
  std::vector<double> trial(c.size());

  for (; out.iterations < opt.max_iters; ++out.iterations) {
    if (gn <= opt.tol * std::max(1.0, F)) {
      out.converged = true;
      break;
    }
    double F_new = F;
    bool accepted = false;
    for (int bt = 0; bt < 200; ++bt) {
      for (std::size_t j = 0; j < c.size(); ++j) trial[j] = c[j] - alpha * g[j];
      F_new = fs.objective(trial);
      if (F_new <= F - 1e-4 * alpha * gn * gn) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no descent representable in floating point
    auto g_new = fs.gradient(trial);
    double ss = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double s = trial[j] - c[j];
      const double y = g_new[j] - g[j];
      ss += s * s;
      sy += s * y;
    }
    alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;
    c.swap(trial);
    g.swap(g_new);
    F = F_new;
    gn = std::sqrt(dot(g, g));
  }
  if (!out.converged && gn <= opt.tol * std::max(1.0, F)) out.converged = true;
  return out;
}

// IRLS for 1 <= p < 2: weights (g^2 + eps^2)^{(p-2)/2}, eps decreased by 10x
// whenever the iterate settles.
Continuous reweighted(const FeasibleSet& fs, double p, const SolverOptions& opt) {
  Continuous out;
  const std::size_t dim = fs.dimension();
  out.c.assign(dim, 0.0);
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  auto g = fs.signal_at(out.c);
  const std::size_t n = g.size();

  // Basis matrix B (n x dim), recovered column-by-column from unit vectors.
  Eigen::MatrixXd B(n, dim);
  const Eigen::Map<const Eigen::VectorXd> g0(g.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd base = g0;
  {
    std::vector<double> e(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      e[j] = 1.0;
      const auto col = fs.signal_at(e);
      for (std::size_t x = 0; x < n; ++x) B(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) = col[x] - base[x];
      e[j] = 0.0;
    }
  }

  const double scale = std::max(1.0, base.cwiseAbs().maxCoeff());
  const double eps_floor = 1e-12 * scale;
  double eps = scale;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd cur = base;
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));

  for (; out.iterations < opt.max_iters; ++out.iterations) {
    for (Eigen::Index x = 0; x < w.size(); ++x) w[x] = std::pow(cur[x] * cur[x] + eps * eps, 0.5 * (p - 2.0));
    w /= w.maxCoeff();
    const Eigen::MatrixXd A = B.transpose() * w.asDiagonal() * B;
    const Eigen::VectorXd rhs = -(B.transpose() * w.asDiagonal() * base);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd next = ldlt.solve(rhs);
    if (!next.allFinite()) break;
    const double change = (next - c).cwiseAbs().maxCoeff();
    c = next;
    cur = base + B * c;
    if (eps > eps_floor) {
      if (change <= 1e-3 * eps) eps = std::max(0.1 * eps, eps_floor);
    } else if (change <= opt.tol * std::max(1.0, c.cwiseAbs().maxCoeff())) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }
  out.c.assign(c.data(), c.data() + c.size());
  return out;
}

Signal real_signal(const GridShape& shape, std::span<const double> values) {
  std::vector<Complex> out(values.begin(), values.end());
  return Signal(shape, std::move(out));
}

// Alphabet-valued candidate closest to g that matches the data, if any is
// found within the budget.
std::optional<Signal> snap(const RecoveryProblem& problem, std::span<const double> g, double continuous_norm,
                           std::size_t budget) {
  const auto& alphabet = problem.alphabet();
  const auto& shape = problem.shape();
  const std::size_t n = g.size();
  auto nearest = [&](double v) {
    return *std::min_element(alphabet.begin(), alphabet.end(),
                             [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
  };
  std::vector<double> candidate(n);
  for (std::size_t x = 0; x < n; ++x) candidate[x] = nearest(g[x]);
  if (auto s = real_signal(shape, candidate); is_feasible(problem, s)) return s;

  // Any feasible alphabet signal h with ||h||_p < threshold satisfies
  // |h - g| <= sqrt(c_size) (threshold + ||g||_p) entrywise by the
  // support-size bound applied to h - g.
  const double radius = std::sqrt(problem.c_size()) * (problem.threshold() + continuous_norm);
  std::vector<std::vector<double>> options(n);
  double total = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (auto a : alphabet) {
      if (std::abs(a - g[x]) <= radius) options[x].push_back(a);
    }
    if (options[x].empty()) options[x].push_back(nearest(g[x]));
    total *= static_cast<double>(options[x].size());
    if (total > static_cast<double>(budget)) return std::nullopt;
  }

  std::optional<Signal> best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    for (std::size_t x = 0; x < n; ++x) candidate[x] = options[x][digit[x]];
    auto s = real_signal(shape, candidate);
    if (is_feasible(problem, s)) {
      const double norm = lp_norm(s, problem.p());
      if (norm < best_norm) {
        best_norm = norm;
        best = std::move(s);
      }
    }
    std::size_t x = 0;
    for (; x < n; ++x) {
      if (++digit[x] < options[x].size()) break;
      digit[x] = 0;
    }
    if (x == n) break;
  }
  return best;
}

}  // namespace

bool is_feasible(const RecoveryProblem& problem, const Signal& signal, double tol) {
  if (!(signal.shape() == problem.shape())) return false;
  const double scale = std::max(1.0, peak_modulus(problem.observed().values()));
  for (auto v : signal.values()) {
    if (std::abs(v.imag()) > tol * scale) return false;
  }
  const auto F = forward(signal);
  const auto& obs = problem.observed();
  const auto& hidden = problem.hidden();
  for (Index m = 0; m < F.size(); ++m) {
    if (hidden.contains(m)) continue;
    if (std::abs(F[m] - obs[m]) > tol * scale) return false;
  }
  return true;
}

RecoveryResult recover(const RecoveryProblem& problem, const SolverOptions& options) {
  const FeasibleSet fs(problem);
  const double p = problem.p().value();
  const auto solution = p >= 2.0 ? descend(fs, options) : reweighted(fs, p, options);
  const auto g = fs.signal_at(solution.c);
  const double continuous_norm = lp_norm(std::span<const double>(g), problem.p());

  std::optional<Signal> snapped;
  if (!problem.alphabet().empty()) snapped = snap(problem, g, continuous_norm, options.snap_budget);

  Signal signal = snapped ? *snapped : real_signal(problem.shape(), g);
  const double norm = lp_norm(signal, problem.p());
  const bool unique = p >= 2.0 && uniqueness_certificate(norm, problem.delta(), problem.c_size());
  return RecoveryResult{std::move(signal),
                        norm,
                        continuous_norm,
                        Certificate{problem.threshold(), norm, unique},
                        solution.iterations,
                        solution.converged,
                        snapped.has_value()};
}

BruteForceResult brute_force_recover(const RecoveryProblem& problem, std::span<const double> alphabet,
                                     std::size_t budget) {
  const auto values = sorted_alphabet(alphabet);
  if (values.empty()) throw DomainError("brute_force_recover: empty alphabet");
  const auto& shape = problem.shape();
  const std::size_t n = shape.size();
  double total = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    total *= static_cast<double>(values.size());
    if (total > static_cast<double>(budget)) {
      throw BudgetError("brute_force_recover: " + std::to_string(values.size()) + "^" + std::to_string(n) +
                        " candidates exceed the budget of " + std::to_string(budget));
    }
  }

  BruteForceResult out{std::nullopt, std::numeric_limits<double>::infinity(), 0, 0, false};
  std::vector<std::size_t> digit(n, 0);
  std::vector<double> candidate(n);
  while (true) {
    for (std::size_t x = 0; x < n; ++x) candidate[x] = values[digit[x]];
    ++out.enumerated;
    auto s = real_signal(shape, candidate);
    if (is_feasible(problem, s, 1e-8)) {
      ++out.feasible;
      const double norm = lp_norm(s, problem.p());
      if (std::abs(norm - out.norm) <= 1e-9) {
        out.ambiguous = true;
      } else if (norm < out.norm) {
        out.norm = norm;
        out.signal = std::move(s);
        out.ambiguous = false;
      }
    }
    std::size_t x = 0;
    for (; x < n; ++x) {
      if (++digit[x] < values.size()) break;
      digit[x] = 0;
    }
    if (x == n) break;
  }
  return out;
}

bool uniqueness_certificate(double norm, double delta, double c_size) {
  if (norm < 0.0 || delta <= 0.0 || c_size <= 0.0) throw DomainError("uniqueness_certificate: invalid inputs");
  return norm < delta / (2.0 * std::sqrt(c_size));
}

bool separation_check(const Signal& f, double delta) {
  std::vector<double> values;
  values.reserve(f.size());
  for (auto v : f.values()) {
    if (std::abs(v.imag()) >= 1e-9) throw DomainError("separation_check: signal is not real-valued");
    values.push_back(v.real());
  }
  std::sort(values.begin(), values.end());
  bool distinct_seen = false;
  double group = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - group <= 1e-9) continue;
    if (values[i] - group < delta - 1e-12) return false;
    distinct_seen = true;
    group = values[i];
  }
  return distinct_seen;
}

std::optional<RecoveryInstance> make_instance(const GridShape& shape, std::span<const double> alphabet,
                                              std::size_t hidden_size, Exponent p, std::uint64_t seed,
                                              bool require_certificate, std::size_t max_draws) {
  const auto values = sorted_alphabet(alphabet);
  if (values.size() < 2) throw DomainError("make_instance: alphabet needs at least two values");
  const std::size_t n = shape.size();
  if (hidden_size < 1 || hidden_size >= n) throw DomainError("make_instance: hidden size out of range");
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) delta = std::min(delta, values[i] - values[i - 1]);
  const std::size_t base_pos = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      values.begin());

  for (std::size_t draw = 0; draw < max_draws; ++draw) {
    Rng rng(derive_seed(seed, draw));

    std::optional<FreqSet> hidden;
    for (int attempt = 0; attempt < 64 && !hidden; ++attempt) {
      std::vector<Index> members;
      while (members.size() < hidden_size) {
        const Index m = rng.uniform_index(n);
        if (std::find(members.begin(), members.end(), m) != members.end()) continue;
        members.push_back(m);
        const Index partner = shape.negate(m);
        if (partner != m) members.push_back(partner);
      }
      if (members.size() == hidden_size) hidden = FreqSet(shape, std::move(members));
    }
    if (!hidden) continue;

    const std::size_t weight = 1 + rng.uniform_index(n - 1);
    const auto positions = random_set(shape, weight, rng.next());
    std::vector<Complex> truth(n, values[base_pos]);
    for (auto x : positions.members()) {
      std::size_t pick = rng.uniform_index(values.size() - 1);
      if (pick >= base_pos) ++pick;
      truth[x] = values[pick];
    }
    Signal f(shape, std::move(truth));
    auto masked = mask_spectrum(forward(f), *hidden);
    RecoveryProblem problem(std::move(masked.observed), *hidden, p, delta, std::nullopt, values);
    if (require_certificate &&
        !(p.value() >= 2.0 && uniqueness_certificate(lp_norm(f, p), delta, problem.c_size()))) {
      continue;
    }
    return RecoveryInstance{std::move(f), std::move(problem)};
  }
  return std::nullopt;
}

}  // namespace spectral
