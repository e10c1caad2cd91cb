// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "spectral/constructions.hpp"
#include "spectral/inequalities.hpp"
#include "spectral/parallel.hpp"
#include "spectral/recovery.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << secs;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << detail << " (" << os.str() << " s)"
            << std::endl;
  if (!pass) ++failures;
}

std::vector<Complex> vec(std::span<const Complex> s) { return {s.begin(), s.end()}; }

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// --- 1 ----------------------------------------------------------------------

std::vector<std::pair<std::uint64_t, std::size_t>> transform_shapes() {
  std::vector<std::pair<std::uint64_t, std::size_t>> shapes;
  for (std::size_t d = 2; d <= 12; ++d) {
    for (std::uint64_t n = 2;; ++n) {
      double size = std::pow(static_cast<double>(n), static_cast<double>(d));
      if (size > 4096) break;
      shapes.emplace_back(n, d);
    }
  }
  for (std::uint64_t n = 2; n <= 64; ++n) shapes.emplace_back(n, 1);
  for (std::uint64_t n : {67,   97,   100,  127,  128,  131,  180,  211,  256,  257,  300,  331,  389,
                          400,  509,  512,  521,  640,  727,  768,  997,  1000, 1024, 1031, 1331, 1500,
                          1777, 2000, 2048, 2053, 2187, 2500, 3001, 3125, 3600, 4001, 4093, 4096}) {
    shapes.emplace_back(n, 1);
  }
  return shapes;
}

void criterion_transform() {
  const auto start = Clock::now();
  const auto shapes = transform_shapes();
  double worst_entry = 0.0, worst_plancherel = 0.0;
  std::vector<double> entry(shapes.size()), planch(shapes.size());
  parallel_for(shapes.size(), std::max(1u, std::thread::hardware_concurrency()), [&](std::size_t i) {
    const auto [n, d] = shapes[i];
    GridShape g(n, d);
    Rng rng(derive_seed(1, i));
    std::vector<Complex> v(g.size());
    for (auto& x : v) x = Complex(rng.normal(), rng.normal());
    const Signal f(g, v);
    const auto F = forward(f);
    const auto want = oracle::dft(v, n, d);
    entry[i] = oracle::max_abs_diff(vec(F.values()), want) / oracle::lp(want, INFINITY);
    const double a = oracle::lp(v, 2), b = oracle::lp(vec(F.values()), 2);
    planch[i] = std::abs(a - b) / a;
  });
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    worst_entry = std::max(worst_entry, entry[i]);
    worst_plancherel = std::max(worst_plancherel, planch[i]);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass = shapes.size() == 200 && worst_entry <= 1e-9 && worst_plancherel <= 1e-10 && secs < 30.0;
  report(1, "transform correctness", pass,
         std::to_string(shapes.size()) + " signals on " + std::to_string(shapes.size()) +
             " grids (N^d <= 4096); max entrywise rel err " + fmt(worst_entry, 3) + " (tol 1e-9), max Plancherel rel err " +
             fmt(worst_plancherel, 3) + " (tol 1e-10)",
         start);
}

// --- 2, 3 -------------------------------------------------------------------

struct Instance {
  Signal f;
  FreqSet S;
  Exponent p;
};

std::vector<Instance> inequality_instances() {
  const std::vector<std::pair<std::uint64_t, std::size_t>> grids{{8, 1},  {16, 1}, {31, 1}, {64, 1}, {128, 1},
                                                                  {4, 2},  {6, 2},  {9, 2},  {16, 2}, {4, 3},
                                                                  {5, 3},  {3, 4}};
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 6.0};
  std::vector<Instance> out;
  Rng rng(20240601);
  for (int i = 0; i < 1000; ++i) {
    const auto [n, d] = grids[rng.uniform_index(grids.size())];
    GridShape g(n, d);
    const auto S = random_set(g, 1 + rng.uniform_index(g.size()), rng.next());
    auto f = random_signal_on(S, rng.next());
    out.push_back(Instance{std::move(f), S, Exponent(ps[i % 5])});
  }
  return out;
}

void criterion_support_size(const std::vector<Instance>& instances) {
  const auto start = Clock::now();
  std::map<double, std::pair<int, int>> per_p;  // p -> (failures, total)
  double worst = INFINITY;
  for (const auto& in : instances) {
    const auto r = verify_support_size_bound(in.f, in.S, in.p);
    auto& [fail, total] = per_p[in.p.value()];
    ++total;
    if (!(r.slack_ratio >= 1.0 - 1e-9)) ++fail;
    worst = std::min(worst, r.slack_ratio);
  }
  int fails = 0;
  std::string detail;
  for (const auto& [p, ft] : per_p) {
    fails += ft.first;
    detail += "p=" + fmt(p) + ": " + std::to_string(ft.first) + "/" + std::to_string(ft.second) + " violations; ";
  }
  detail += "min slack " + fmt(worst);
  if (fails) detail += " (the bound is a theorem only for p >= 2)";
  report(2, "support-size inequality suite", fails == 0, detail, start);
}

void criterion_indicator_dual(const std::vector<Instance>& instances) {
  const auto start = Clock::now();
  int fails = 0;
  double worst = INFINITY;
  for (const auto& in : instances) {
    const auto r = verify_indicator_dual_bound(in.f, in.S, in.p);
    if (!(r.slack_ratio >= 1.0 - 1e-9)) ++fails;
    worst = std::min(worst, r.slack_ratio);
  }
  int eq_cases = 0, eq_fails = 0;
  double worst_eq = 0.0;
  for (std::uint64_t n : {4u, 8u, 9u}) {
    GridShape g(n, 2);
    // f = 1^_H has spectrum 1_H, so S = H.
    const auto H = subspace_pair(g, SubspaceSpec{{0}}).subspace;
    const auto f = indicator_spectrum(H);
    for (const char* p : {"1", "2", "4", "inf"}) {
      const auto r = verify_indicator_dual_bound(f, H, Exponent::parse(p));
      const double rel = std::abs(r.lhs - r.rhs) / r.rhs;
      worst_eq = std::max(worst_eq, rel);
      ++eq_cases;
      if (rel > 1e-9) ++eq_fails;
    }
  }
  report(3, "indicator-dual inequality suite", fails == 0 && eq_fails == 0,
         std::to_string(fails) + "/1000 violations, min slack " + fmt(worst) + "; subgroup equality " +
             std::to_string(eq_cases - eq_fails) + "/" + std::to_string(eq_cases) + " cases, max rel gap " +
             fmt(worst_eq, 3),
         start);
}

// --- 4 ----------------------------------------------------------------------

void criterion_tail() {
  const auto start = Clock::now();
  const GridShape g(64, 1);
  const double a = std::pow(16.0, 0.75);
  const auto r = phi_tail_experiment(g, 16, a, 2000, 4, std::max(1u, std::thread::hardware_concurrency()));
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  report(4, "phi tail bound", r.holds && secs < 60.0,
         "P(phi >= " + fmt(a) + ") empirical " + fmt(r.empirical) + " (" + std::to_string(r.hits) + "/2000) vs bound " +
             fmt(r.bound) + " + 3 sigma = " + fmt(r.allowance) + " (unclamped bound " +
             fmt(2.0 * 64.0 * std::exp(2.0 - a * a / 16.0)) + ", so the cap at 1 binds)",
         start);
}

// --- 5 ----------------------------------------------------------------------

void criterion_sharpness() {
  const auto start = Clock::now();
  const Exponent p(5);
  const double target = std::pow(2.0, 1.0 / 5.0);
  bool pass = true;
  std::string detail;
  for (std::uint64_t n : {64u, 128u, 256u}) {
    const GridShape g(n, 1);
    const auto size = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
    SharpnessOptions opt;
    opt.eps = 0.1;
    opt.rule = SharpnessRule::MeasuredNorm;
    const auto r = sample_sharpness_set(g, size, p, n, opt);
    bool ok = r.found;
    if (ok) {
      const auto f = normalized_indicator_signal(*r.set);
      ok = within_bound(lp_norm(f, p), target) && std::abs(f[0] - 1.0) < 1e-12 &&
           std::abs(lp_norm(f, Exponent::infinity()) - 1.0) < 1e-12 && sharpness_norm_bound(*r.set, p).holds;
    }
    pass = pass && ok;
    detail += "N=" + std::to_string(n) + " |S|=" + std::to_string(size) + ": ||f||_5=" + fmt(r.norm_p) + " <= " +
              fmt(target) + " after " + std::to_string(r.draws) + " draws, phi=" + fmt(r.phi) +
              (r.phi_certified ? " (phi-certified)" : " (phi above |S|^0.6)") + "; ";
  }
  detail += "sets accepted on the measured norm, sup norm 1 at the origin";
  report(5, "sharpness family", pass, detail, start);
}

// --- 6 ----------------------------------------------------------------------

void criterion_endpoint() {
  const auto start = Clock::now();
  const Exponent p(4);
  bool pass = true;
  std::string detail;
  for (std::uint64_t n : {32u, 64u}) {
    const GridShape g(n, 1);
    const auto size = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
    LambdaSearchOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto c = lambda_p_search(g, size, p, 6, opt);
    const double C = c.empirical_constant;
    const auto f = normalized_indicator_signal(c.set);
    const double norm = lp_norm(f, p);
    const bool ok = C <= 4.0 && lambda_indicator_check(c.set, p, C) && within_bound(norm, C) &&
                    std::abs(lp_norm(f, Exponent::infinity()) - 1.0) < 1e-12;
    pass = pass && ok;
    detail += "N=" + std::to_string(n) + " |S|=" + std::to_string(size) + ": C=" + fmt(C) + ", ||f||_4=" + fmt(norm) +
              "; ";
  }
  detail += "indicator bound holds with C, sup norm 1";
  report(6, "endpoint family", pass, detail, start);
}

// --- 7 ----------------------------------------------------------------------

void criterion_recovery() {
  const auto start = Clock::now();
  const std::vector<double> alphabet{0.0, 1.0};
  const Exponent p(2);
  struct Cell {
    std::uint64_t n;
    std::size_t size;
    int accepted = 0;
    int rejected = 0;
  };
  std::vector<Cell> cells;
  for (std::uint64_t n : {8u, 16u}) {
    for (std::size_t s : {2u, 3u, 4u}) cells.push_back({n, s});
  }

  std::vector<RecoveryInstance> kept;
  for (std::uint64_t draw = 0; kept.size() < 100 && draw < 200000; ++draw) {
    auto& cell = cells[draw % cells.size()];
    auto inst = make_instance(GridShape(cell.n, 1), alphabet, cell.size, p, derive_seed(7, draw), false, 1);
    if (!inst) continue;
    const double norm = lp_norm(inst->truth, p);
    if (!separation_check(inst->truth, 1.0) || !uniqueness_certificate(norm, 1.0, inst->problem.c_size())) {
      ++cell.rejected;
      continue;
    }
    ++cell.accepted;
    kept.push_back(std::move(*inst));
  }

  std::vector<char> exact(kept.size(), 0), agree(kept.size(), 0), covered(kept.size(), 0);
  parallel_for(kept.size(), std::max(1u, std::thread::hardware_concurrency()), [&](std::size_t i) {
    const auto& inst = kept[i];
    const auto r = recover(inst.problem);
    double err = 0.0;
    for (Index x = 0; x < inst.truth.size(); ++x) err = std::max(err, std::abs(r.signal[x] - inst.truth[x]));
    exact[i] = err <= 1e-6 && r.certificate.unique;
    const auto brute = brute_force_recover(inst.problem, alphabet);
    covered[i] = 1;
    if (brute.signal && !brute.ambiguous) {
      double d = 0.0;
      for (Index x = 0; x < inst.truth.size(); ++x) d = std::max(d, std::abs(r.signal[x] - (*brute.signal)[x]));
      agree[i] = d <= 1e-6;
    }
  });
  const auto count = [](const std::vector<char>& v) { return std::count(v.begin(), v.end(), 1); };
  std::string cells_text;
  for (const auto& c : cells) {
    cells_text += "(N=" + std::to_string(c.n) + ",|S|=" + std::to_string(c.size) + "):" + std::to_string(c.accepted) +
                  " kept/" + std::to_string(c.rejected) + " rejected ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass = kept.size() == 100 && count(exact) == 100 && count(agree) == count(covered) && secs < 300.0;
  report(7, "recovery exactness", pass,
         std::to_string(count(exact)) + "/" + std::to_string(kept.size()) + " exact, brute force agrees " +
             std::to_string(count(agree)) + "/" + std::to_string(count(covered)) + "; p=2, draws per cell " +
             cells_text,
         start);
}

// --- 8 ----------------------------------------------------------------------

void criterion_gradient() {
  const auto start = Clock::now();
  Rng rng(8);
  double worst = 0.0;
  int points = 0;
  for (double pv : {2.0, 3.0, 4.0}) {
    for (int t = 0; t < 50; ++t) {
      const GridShape g(t % 2 ? 16 : 12, 1);
      std::vector<Complex> v(g.size());
      for (auto& x : v) x = rng.normal();
      std::vector<Index> hidden;
      for (int k = 0; k < 3; ++k) hidden.push_back(1 + rng.uniform_index(g.size() - 1));
      auto masked = mask_spectrum(forward(Signal(g, v)), FreqSet(g, hidden));
      const RecoveryProblem prob(masked.observed, masked.hidden, Exponent(pv), 1.0);
      const FeasibleSet fs(prob);
      std::vector<double> c(fs.dimension());
      for (auto& x : c) x = rng.normal();
      const auto grad = fs.gradient(c);
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        auto up = c, down = c;
        up[j] += 1e-6;
        down[j] -= 1e-6;
        const double fd = (fs.objective(up) - fs.objective(down)) / 2e-6;
        num = std::max(num, std::abs(fd - grad[j]));
        den = std::max(den, std::abs(grad[j]));
      }
      worst = std::max(worst, num / den);
      ++points;
    }
  }
  report(8, "gradient check", worst <= 1e-5,
         std::to_string(points) + " points (50 per p in {2,3,4}); max rel err " + fmt(worst, 3) + " (tol 1e-5)", start);
}

// --- 9 ----------------------------------------------------------------------

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(SPECTRAL_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string csv_body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out += line + "\n";
  }
  return out;
}

void criterion_determinism() {
  const auto start = Clock::now();
  const std::vector<std::string> experiments{
      "sweep --alpha 0.5 --p-mode critical --grid-range 8..128 --seed 5",
      "sweep --alpha 0.5 --p-mode subcritical --grid-range 8..256 --seed 6",
      "phi-stats --grid 64x1 --size 16 --trials 2000 --format csv --seed 4",
      "recover --grid 16x1 --alphabet 0,1 --hidden-size 2 --instances 40 --require-certificate --format csv --seed 9",
      "recover --grid 12x1 --alphabet 0,1,2 --hidden-size 3 --instances 20 --p 3 --format csv --seed 10",
  };
  int identical = 0;
  for (const auto& e : experiments) {
    const auto a = run_cli(e + " --threads 1");
    const auto b = run_cli(e + " --threads 8");
    const auto c = run_cli(e + " --threads 8");
    const auto body = csv_body(a.out);
    if (a.code == b.code && a.code == c.code && !body.empty() && body.find('\n') != body.rfind('\n') &&
        body == csv_body(b.out) && body == csv_body(c.out)) {
      ++identical;
    }
  }
  report(9, "determinism across thread counts", identical == static_cast<int>(experiments.size()),
         std::to_string(identical) + "/" + std::to_string(experiments.size()) +
             " CLI experiments byte-identical over threads 1, 8, 8",
         start);
}

}  // namespace

int main() {
  criterion_transform();
  const auto instances = inequality_instances();
  criterion_support_size(instances);
  criterion_indicator_dual(instances);
  criterion_tail();
  criterion_sharpness();
  criterion_endpoint();
  criterion_recovery();
  criterion_gradient();
  criterion_determinism();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
