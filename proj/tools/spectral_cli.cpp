// spectral: command-line workbench for spectral synthesis on Z_N^d.
//
// Exit codes: 0 ok, 2 usage error, 3 a checked statement failed, 4 bad data
// or domain error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "spectral/constructions.hpp"
#include "spectral/errors.hpp"
#include "spectral/fourier.hpp"
#include "spectral/inequalities.hpp"
#include "spectral/io.hpp"
#include "spectral/parallel.hpp"
#include "spectral/recovery.hpp"
#include "spectral/rng.hpp"

using namespace spectral;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;
constexpr int kAssertion = 3;
constexpr int kData = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, std::string> kExplain = {
    {"transform",
     "transform: unitary DFT on Z_N^d, f^(m) = N^{-d/2} sum_x e^{-2 pi i x.m/N} f(x).\n"
     "A space-domain file is transformed forward, a frequency-domain file inverted."},
    {"verify",
     "verify: sup-norm bounds for f with supp(f^) inside S.\n"
     "  support-size:   ||f||_inf <= sqrt(|S| / N^{2d/p}) ||f||_p   (a theorem for p >= 2)\n"
     "  indicator-dual: ||f||_inf <= N^{-d/2} ||f||_p ||1^_S||_{p'}  (all p in [1, inf])"},
    {"construct",
     "construct: extremal sets.\n"
     "  random:    uniform random S of size |S|\n"
     "  subspace:  coordinate subgroup H and its annihilator; equality in the indicator-dual bound\n"
     "  sharpness: random S whose normalized indicator signal f = N^{d/2}/|S| 1^_S has\n"
     "             ||f||_inf = 1 and ||f||_p <= 2^{1/p}, with ||f||_p <= (N^d (phi/|S|)^p + 1)^{1/p}"},
    {"phi-stats",
     "phi-stats: phi(S) = max_{m != 0} |sum_{x in S} e^{-2 pi i x.m/N}| over random S, against\n"
     "P(phi(S) >= a) <= 2 N^d e^2 e^{-a^2/|S|} (plus a 3-sigma Monte-Carlo allowance)."},
    {"lambda-search",
     "lambda-search: randomized search for S with small empirical Lambda(p) constant\n"
     "C = max_a N^{-d/p} ||sum a_i e_{m_i}||_p / ||a||_2, then checks\n"
     "||1^_S||_p <= C N^{d/p} N^{-d/2} |S|^{1/2} and reports the normalized indicator signal."},
    {"recover",
     "recover: minimize ||g||_p over real g whose spectrum matches the observed data off S.\n"
     "Uniqueness certificate: ||f||_p < delta / (2 sqrt(C)) with |S| = C N^{2d/p}, p >= 2,\n"
     "for delta-separated f. The minimizer is snapped to the declared alphabet."},
    {"sweep",
     "sweep: for N over a doubling range and |S| = ceil(N^alpha), reports the vanishing\n"
     "threshold |S|^{1/2} N^{-d/p}, measured support-size ratios for random f, and (for 2 < p < inf)\n"
     "the sup norm of a bounded normalized-indicator family. Below p = 2d/alpha the threshold\n"
     "decays; at p = 2d/alpha it is constant and the family keeps ||f||_inf = 1."},
};

struct Global {
  bool explain = false;
  std::string format;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void emit(const Global& g, const std::string& content) {
  if (g.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    io::write_file_atomic(g.out, content.back() == '\n' ? content : content + "\n");
  }
}

std::string resolve_format(const Global& g, const char* fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "json" && f != "csv") throw UsageError("--format: expected json or csv, got '" + f + "'");
  return f;
}

GridShape parse_grid(const std::string& text) {
  try {
    return GridShape::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

Exponent parse_p(const std::string& text, const char* field = "--p") {
  try {
    return Exponent::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string(field) + ": " + e.what());
  }
}

std::size_t size_from(const GridShape& shape, std::optional<std::size_t> size, std::optional<double> alpha) {
  if (size && alpha) throw UsageError("--size and --alpha are mutually exclusive");
  if (alpha) {
    if (!(*alpha > 0.0)) throw UsageError("--alpha must be positive");
    const double s = std::ceil(std::pow(static_cast<double>(shape.modulus()), *alpha) - 1e-9);
    return static_cast<std::size_t>(std::clamp(s, 1.0, static_cast<double>(shape.size())));
  }
  if (!size) throw UsageError("--size or --alpha is required");
  if (*size < 1 || *size > shape.size()) {
    throw UsageError("--size must lie in [1, " + std::to_string(shape.size()) + "]");
  }
  return *size;
}

std::vector<double> parse_alphabet(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--alphabet: cannot parse '" + item + "'");
    }
  }
  if (out.size() < 2) throw UsageError("--alphabet needs at least two values");
  return out;
}

json config_json(const std::string& command, const json& params, const Global& g) {
  return json{{"command", command}, {"seed", g.seed}, {"threads", g.threads}, {"params", params}};
}

std::string csv_output(const std::string& command, const json& params, const Global& g, io::CsvTable table) {
  table.header_lines.insert(table.header_lines.begin(),
                            {"config " + config_json(command, params, g).dump(), "generated " + timestamp()});
  return table.str();
}

// --- subcommands ---------------------------------------------------------

struct TransformArgs {
  std::string input;
};

int run_transform(const TransformArgs& a, const Global& g) {
  const auto text = io::read_file(a.input);
  const auto doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.contains("domain")) throw DataError("--input: not a signal or spectrum file");
  resolve_format(g, "json");
  if (doc["domain"] == "space") {
    emit(g, io::spectrum_to_json(forward(io::signal_from_json(text))));
  } else {
    emit(g, io::signal_to_json(inverse(io::spectrum_from_json(text))));
  }
  return 0;
}

struct VerifyArgs {
  std::string which = "support-size";
  std::string grid;
  std::string p = "2";
  std::string set_file;
  std::string signal_file;
  double support_tol = kSupportTolerance;
};

int run_verify(const VerifyArgs& a, const Global& g) {
  BoundKind kind;
  try {
    kind = parse_bound_kind(a.which);
  } catch (const Error& e) {
    throw UsageError(std::string("--which: ") + e.what());
  }
  const auto p = parse_p(a.p);
  const auto S = io::set_from_json(io::read_file(a.set_file));
  const auto f = io::signal_from_json(io::read_file(a.signal_file));
  if (!a.grid.empty() && !(parse_grid(a.grid) == f.shape())) {
    throw UsageError("--grid: " + a.grid + " does not match the signal file grid " + f.shape().to_string());
  }
  const auto report = kind == BoundKind::SupportSize ? verify_support_size_bound(f, S, p, a.support_tol)
                                                     : verify_indicator_dual_bound(f, S, p, a.support_tol);
  if (resolve_format(g, "json") == "json") {
    emit(g, io::report_to_json(report));
  } else {
    io::CsvTable t;
    t.columns = {"which", "N", "d", "size", "p", "lhs", "rhs", "slack_ratio", "holds"};
    t.rows.push_back({to_string(report.which), std::to_string(report.grid.modulus()),
                      std::to_string(report.grid.dim()), std::to_string(report.set_size), report.p.to_string(),
                      io::format_double(report.lhs), io::format_double(report.rhs),
                      io::format_double(report.slack_ratio), report.holds ? "1" : "0"});
    emit(g, csv_output("verify", json{{"which", a.which}, {"p", a.p}}, g, t));
  }
  return report.holds ? 0 : kAssertion;
}

struct ConstructArgs {
  std::string kind = "random";
  std::string grid;
  std::optional<std::size_t> size;
  std::optional<double> alpha;
  std::vector<std::size_t> axes;
  std::string p = "5";
  double eps = 0.1;
  std::size_t max_draws = 10000;
  std::string rule = "norm";
  std::string signal_out;
};

int run_construct(const ConstructArgs& a, const Global& g) {
  const auto shape = parse_grid(a.grid);
  resolve_format(g, "json");
  json out;
  std::optional<Signal> signal;
  if (a.kind == "random") {
    const auto S = random_set(shape, size_from(shape, a.size, a.alpha), g.seed);
    out = json::parse(io::set_to_json(S));
  } else if (a.kind == "subspace") {
    const auto pair = subspace_pair(shape, SubspaceSpec{a.axes});
    out["subspace"] = json::parse(io::set_to_json(pair.subspace));
    out["annihilator"] = json::parse(io::set_to_json(pair.annihilator));
    out["degenerate"] = pair.degenerate;
    signal = indicator_spectrum(pair.subspace);
  } else if (a.kind == "sharpness") {
    SharpnessOptions opt;
    opt.eps = a.eps;
    opt.max_draws = a.max_draws;
    if (a.rule == "phi") {
      opt.rule = SharpnessRule::PhiCertificate;
    } else if (a.rule == "norm") {
      opt.rule = SharpnessRule::MeasuredNorm;
    } else {
      throw UsageError("--rule: expected phi or norm");
    }
    const auto p = parse_p(a.p);
    const auto r = sample_sharpness_set(shape, size_from(shape, a.size, a.alpha), p, g.seed, opt);
    out["found"] = r.found;
    out["draws"] = r.draws;
    out["phi"] = r.phi;
    out["phi_threshold"] = r.phi_threshold;
    out["phi_certified"] = r.phi_certified;
    out["norm_p"] = r.norm_p;
    out["target"] = r.target;
    out["sup_norm"] = r.sup_norm;
    if (r.set) {
      out["set"] = json::parse(io::set_to_json(*r.set));
      const auto check = sharpness_norm_bound(*r.set, p);
      out["norm_bound"] = check.bound;
      signal = normalized_indicator_signal(*r.set);
    }
    if (!a.signal_out.empty() && signal) io::write_file_atomic(a.signal_out, io::signal_to_json(*signal));
    emit(g, out.dump(2));
    return r.found ? 0 : kAssertion;
  } else {
    throw UsageError("--kind: expected random, subspace or sharpness, got '" + a.kind + "'");
  }
  if (!a.signal_out.empty() && signal) io::write_file_atomic(a.signal_out, io::signal_to_json(*signal));
  emit(g, out.dump(2));
  return 0;
}

struct PhiArgs {
  std::string grid;
  std::optional<std::size_t> size;
  std::optional<double> alpha;
  std::optional<double> a;
  double a_exponent = 0.75;
  std::size_t trials = 2000;
};

int run_phi(const PhiArgs& a, const Global& g) {
  const auto shape = parse_grid(a.grid);
  const auto size = size_from(shape, a.size, a.alpha);
  const double level = a.a ? *a.a : std::pow(static_cast<double>(size), a.a_exponent);
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const auto r = phi_tail_experiment(shape, size, level, a.trials, g.seed, g.threads);
  if (resolve_format(g, "json") == "json") {
    emit(g, json{{"grid", shape.to_string()},
                 {"size", size},
                 {"a", level},
                 {"trials", r.trials},
                 {"hits", r.hits},
                 {"empirical", r.empirical},
                 {"bound", r.bound},
                 {"allowance", r.allowance},
                 {"holds", r.holds}}
                .dump(2));
  } else {
    io::CsvTable t;
    t.columns = {"kind", "N", "d", "size", "p", "statistic", "bound", "pass"};
    t.rows.push_back({"phi-tail", std::to_string(shape.modulus()), std::to_string(shape.dim()), std::to_string(size),
                      "", io::format_double(r.empirical), io::format_double(r.allowance), r.holds ? "1" : "0"});
    emit(g, csv_output("phi-stats", json{{"grid", a.grid}, {"size", size}, {"a", level}, {"trials", a.trials}}, g, t));
  }
  return r.holds ? 0 : kAssertion;
}

struct LambdaArgs {
  std::string grid;
  std::optional<std::size_t> size;
  std::optional<double> alpha;
  std::string p = "4";
  std::size_t budget = 8;
  std::size_t trials = 64;
  std::size_t swaps = 0;
  std::string signal_out;
};

int run_lambda(const LambdaArgs& a, const Global& g) {
  const auto shape = parse_grid(a.grid);
  const auto size = size_from(shape, a.size, a.alpha);
  const auto p = parse_p(a.p);
  if (!p.is_finite() || p.value() <= 2.0) throw UsageError("--p must satisfy 2 < p < inf");
  LambdaSearchOptions opt{a.budget, a.trials, a.swaps, g.threads};
  const auto c = lambda_p_search(shape, size, p, g.seed, opt);
  const auto f = normalized_indicator_signal(c.set);
  const double norm_p = lp_norm(f, p);
  const bool check = lambda_indicator_check(c.set, p, c.empirical_constant);
  json out{{"set", json::parse(io::set_to_json(c.set))},
           {"p", p.value()},
           {"empirical_constant", c.empirical_constant},
           {"trials", c.trials},
           {"seed", c.seed},
           {"indicator_norm", lp_norm(indicator_spectrum(c.set), p)},
           {"indicator_bound", lambda_indicator_bound(c.set, p, c.empirical_constant)},
           {"indicator_check", check},
           {"signal_norm_p", norm_p},
           {"signal_sup_norm", lp_norm(f, Exponent::infinity())}};
  resolve_format(g, "json");
  if (!a.signal_out.empty()) io::write_file_atomic(a.signal_out, io::signal_to_json(f));
  emit(g, out.dump(2));
  return check ? 0 : kAssertion;
}

struct RecoverArgs {
  std::string problem;
  std::string grid;
  std::string alphabet;
  std::optional<std::size_t> hidden_size;
  std::optional<std::string> p;
  std::size_t instances = 1;
  bool require_certificate = false;
  double tol = 1e-8;
  std::size_t max_iters = 50000;
};

struct RecoverRow {
  std::uint64_t seed;
  GridShape shape{2, 1};
  std::size_t hidden = 0;
  std::string p;
  double objective = 0.0;
  bool unique = false;
  bool exact = false;
  std::size_t iterations = 0;
  bool found = false;
};

int run_recover(const RecoverArgs& a, const Global& g) {
  if (!a.problem.empty()) {
    const auto problem =
        io::problem_from_json(io::read_file(a.problem), a.alphabet.empty() ? std::vector<double>{} : parse_alphabet(a.alphabet));
    for (const auto& w : problem.warnings()) std::cerr << "warning: " << w << '\n';
    const auto r = recover(problem, SolverOptions{a.tol, a.max_iters});
    json out{{"objective", r.objective},
             {"continuous_objective", r.continuous_objective},
             {"threshold", r.certificate.threshold},
             {"unique", r.certificate.unique},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"snapped", r.snapped},
             {"feasible", is_feasible(problem, r.signal)},
             {"signal", json::parse(io::signal_to_json(r.signal))}};
    resolve_format(g, "json");
    emit(g, out.dump(2));
    return 0;
  }

  const auto shape = parse_grid(a.grid);
  if (a.alphabet.empty()) throw UsageError("--alphabet is required without --problem");
  const auto alphabet = parse_alphabet(a.alphabet);
  if (!a.hidden_size) throw UsageError("--hidden-size is required without --problem");
  if (*a.hidden_size < 1 || *a.hidden_size >= shape.size()) {
    throw UsageError("--hidden-size must lie in [1, " + std::to_string(shape.size() - 1) + "]");
  }
  const auto p = a.p ? parse_p(*a.p) : Exponent(2.0);
  if (!p.is_finite()) throw UsageError("--p must be finite for recovery");
  if (a.instances < 1) throw UsageError("--instances must be >= 1");

  std::vector<RecoverRow> rows(a.instances);
  parallel_for(a.instances, g.threads, [&](std::size_t i) {
    RecoverRow& row = rows[i];
    row.seed = g.seed + i;
    row.shape = shape;
    row.p = p.to_string();
    const auto inst = make_instance(shape, alphabet, *a.hidden_size, p, row.seed, a.require_certificate);
    if (!inst) return;
    row.found = true;
    row.hidden = inst->problem.hidden().size();
    const auto r = recover(inst->problem, SolverOptions{a.tol, a.max_iters});
    row.objective = r.objective;
    row.unique = r.certificate.unique;
    row.iterations = r.iterations;
    double err = 0.0;
    for (Index x = 0; x < r.signal.size(); ++x) err = std::max(err, std::abs(r.signal[x] - inst->truth[x]));
    row.exact = err <= 1e-6;
  });

  const bool all_exact = std::all_of(rows.begin(), rows.end(), [](const RecoverRow& r) { return r.found && r.exact; });
  const json params{{"grid", a.grid}, {"alphabet", a.alphabet}, {"hidden_size", *a.hidden_size},
                    {"p", p.to_string()}, {"instances", a.instances}, {"require_certificate", a.require_certificate}};
  if (resolve_format(g, "json") == "csv") {
    io::CsvTable t;
    t.columns = {"seed", "N", "d", "size", "p", "objective", "unique", "exact_match", "iterations"};
    for (const auto& r : rows) {
      if (!r.found) {
        t.rows.push_back({std::to_string(r.seed), std::to_string(shape.modulus()), std::to_string(shape.dim()), "",
                          r.p, "", "", "no-instance", ""});
        continue;
      }
      t.rows.push_back({std::to_string(r.seed), std::to_string(shape.modulus()), std::to_string(shape.dim()),
                        std::to_string(r.hidden), r.p, io::format_double(r.objective), r.unique ? "1" : "0",
                        r.exact ? "1" : "0", std::to_string(r.iterations)});
    }
    emit(g, csv_output("recover", params, g, t));
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      if (!r.found) {
        arr.push_back({{"seed", r.seed}, {"found", false}});
        continue;
      }
      arr.push_back({{"seed", r.seed},
                     {"N", shape.modulus()},
                     {"d", shape.dim()},
                     {"size", r.hidden},
                     {"p", r.p},
                     {"objective", r.objective},
                     {"unique", r.unique},
                     {"exact_match", r.exact},
                     {"iterations", r.iterations}});
    }
    emit(g, json{{"config", config_json("recover", params, g)}, {"instances", arr}, {"all_exact", all_exact}}.dump(2));
  }
  return all_exact ? 0 : kAssertion;
}

struct SweepArgs {
  double alpha = 0.5;
  std::string p_mode = "critical";
  std::string p;
  std::string grid_range = "8..128";
  std::size_t dim = 1;
  std::size_t budget = 4;
  std::size_t trials = 32;
};

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("--grid-range: expected LO..HI, got '" + text + "'");
  try {
    const auto lo = std::stoull(text.substr(0, dots));
    const auto hi = std::stoull(text.substr(dots + 2));
    if (lo < 2 || hi < lo) throw UsageError("--grid-range: need 2 <= LO <= HI");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--grid-range: cannot parse '" + text + "'");
  }
}

int run_sweep(const SweepArgs& a, const Global& g) {
  if (!(a.alpha > 0.0)) throw UsageError("--alpha must be positive");
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  const double critical = 2.0 * static_cast<double>(a.dim) / a.alpha;
  double pv;
  if (a.p_mode == "critical") {
    pv = critical;
  } else if (a.p_mode == "subcritical") {
    pv = std::max(1.0, 0.5 * critical);
  } else if (a.p_mode == "fixed") {
    if (a.p.empty()) throw UsageError("--p is required with --p-mode fixed");
    pv = parse_p(a.p).value();
  } else {
    throw UsageError("--p-mode: expected critical, subcritical or fixed");
  }
  if (!std::isfinite(pv)) throw UsageError("--p must be finite for a sweep");
  const Exponent p(pv);
  const auto [lo, hi] = parse_range(a.grid_range);
  std::vector<std::uint64_t> moduli;
  for (auto n = lo; n <= hi; n *= 2) moduli.push_back(n);

  std::vector<std::vector<std::vector<std::string>>> blocks(moduli.size());
  std::vector<double> thresholds(moduli.size());
  parallel_for(moduli.size(), g.threads, [&](std::size_t i) {
    const GridShape shape(moduli[i], a.dim);
    const double s = std::ceil(std::pow(static_cast<double>(shape.modulus()), a.alpha) - 1e-9);
    const auto size = static_cast<std::size_t>(std::clamp(s, 1.0, static_cast<double>(shape.size())));
    const std::uint64_t task_seed = derive_seed(g.seed, moduli[i]);
    const double tau = vanishing_threshold(size, shape, p);
    thresholds[i] = tau;
    auto row = [&](const char* kind, double stat, double bound, bool pass) {
      return std::vector<std::string>{kind,         std::to_string(shape.modulus()), std::to_string(shape.dim()),
                                      std::to_string(size), p.to_string(), io::format_double(stat),
                                      io::format_double(bound), pass ? "1" : "0"};
    };
    auto& rows = blocks[i];
    rows.push_back(row("threshold", tau, 0.0, true));  // bound filled after all tasks finish

    const auto S = random_set(shape, size, derive_seed(task_seed, 0));
    const auto f = random_signal_on(S, derive_seed(task_seed, 1));
    const double sup = lp_norm(f, Exponent::infinity());
    const double rhs = tau * lp_norm(f, p);
    rows.push_back(row("random-signal", sup, rhs, within_bound(sup, rhs)));

    if (p.value() > 2.0 && size < shape.size()) {
      LambdaSearchOptions opt{a.budget, a.trials, 0, 1};
      const auto c = lambda_p_search(shape, size, p, derive_seed(task_seed, 2), opt);
      const auto fn = normalized_indicator_signal(c.set);
      const double fsup = lp_norm(fn, Exponent::infinity());
      const double fnorm = lp_norm(fn, p);
      rows.push_back(row("bounded-family", fsup, tau * fnorm, within_bound(fsup, tau * fnorm)));
      rows.push_back(row("bounded-family-norm", fnorm, c.empirical_constant,
                         within_bound(fnorm, c.empirical_constant)));
    }
  });

  io::CsvTable t;
  t.columns = {"kind", "N", "d", "size", "p", "statistic", "bound", "pass"};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& first = blocks[i][0];
    // Threshold rows are checked against the first grid: non-increasing in N.
    first[6] = io::format_double(thresholds[0]);
    first[7] = within_bound(thresholds[i], thresholds[0]) ? "1" : "0";
    for (auto& r : blocks[i]) t.rows.push_back(std::move(r));
  }
  const json params{{"alpha", a.alpha}, {"p_mode", a.p_mode}, {"p", p.to_string()}, {"grid_range", a.grid_range},
                    {"dim", a.dim},     {"budget", a.budget}, {"trials", a.trials}};
  if (resolve_format(g, "csv") == "csv") {
    emit(g, csv_output("sweep", params, g, t));
  } else {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o;
      for (std::size_t k = 0; k < t.columns.size(); ++k) o[t.columns[k]] = r[k];
      rows.push_back(o);
    }
    emit(g, json{{"config", config_json("sweep", params, g)}, {"rows", rows}}.dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral synthesis workbench on Z_N^d"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Global g;
  app.add_flag("--explain", g.explain, "Describe what the subcommand computes and exit");
  app.add_option("--format", g.format, "json or csv");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Random seed")->envname("SPECTRAL_SEED");
  app.add_option("--out", g.out, "Output file (default stdout)");

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Forward or inverse transform of a file");
  transform->add_option("--input", ta.input, "Signal or spectrum JSON")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a sup-norm bound");
  verify->add_option("--which", va.which, "support-size | indicator-dual (aliases eq02, eq03)");
  verify->add_option("--grid", va.grid, "NxD; must match the files");
  verify->add_option("--p", va.p, "Exponent (number, fraction or inf)");
  verify->add_option("--set-file", va.set_file)->required();
  verify->add_option("--signal-file", va.signal_file)->required();
  verify->add_option("--support-tol", va.support_tol, "Relative support cutoff");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build random, subspace or sharpness sets");
  construct->add_option("--kind", ca.kind, "random | subspace | sharpness");
  construct->add_option("--grid", ca.grid)->required();
  construct->add_option("--size", ca.size);
  construct->add_option("--alpha", ca.alpha, "Size ceil(N^alpha)");
  construct->add_option("--axes", ca.axes, "Free axes of the subspace (0-based)")->delimiter(',');
  construct->add_option("--p", ca.p);
  construct->add_option("--eps", ca.eps);
  construct->add_option("--max-draws", ca.max_draws);
  construct->add_option("--rule", ca.rule, "phi | norm");
  construct->add_option("--signal-out", ca.signal_out, "Also write the associated signal");

  PhiArgs pa;
  auto* phi_cmd = app.add_subcommand("phi-stats", "Monte-Carlo tail of phi(S)");
  phi_cmd->add_option("--grid", pa.grid)->required();
  phi_cmd->add_option("--size", pa.size);
  phi_cmd->add_option("--alpha", pa.alpha);
  phi_cmd->add_option("--a", pa.a, "Level a (default |S|^{a-exponent})");
  phi_cmd->add_option("--a-exponent", pa.a_exponent);
  phi_cmd->add_option("--trials", pa.trials);

  LambdaArgs la;
  auto* lambda = app.add_subcommand("lambda-search", "Search for sets with small Lambda(p) constant");
  lambda->add_option("--grid", la.grid)->required();
  lambda->add_option("--size", la.size);
  lambda->add_option("--alpha", la.alpha);
  lambda->add_option("--p", la.p);
  lambda->add_option("--budget", la.budget, "Random restarts");
  lambda->add_option("--trials", la.trials, "Coefficient probes");
  lambda->add_option("--swaps", la.swaps, "Swap attempts per restart (0: 8 |S|)");
  lambda->add_option("--signal-out", la.signal_out);

  RecoverArgs ra;
  auto* rec = app.add_subcommand("recover", "Recover signals with hidden frequencies");
  rec->add_option("--problem", ra.problem, "Problem JSON");
  rec->add_option("--grid", ra.grid);
  rec->add_option("--alphabet", ra.alphabet, "Comma-separated values");
  rec->add_option("--hidden-size", ra.hidden_size);
  rec->add_option("--p", ra.p);
  rec->add_option("--instances", ra.instances);
  rec->add_flag("--require-certificate", ra.require_certificate, "Only draw certified instances");
  rec->add_option("--tol", ra.tol);
  rec->add_option("--max-iters", ra.max_iters);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Threshold decay and bounded families across N");
  sweep->add_option("--alpha", sa.alpha);
  sweep->add_option("--p-mode", sa.p_mode, "critical | subcritical | fixed");
  sweep->add_option("--p", sa.p);
  sweep->add_option("--grid-range", sa.grid_range, "LO..HI, doubling");
  sweep->add_option("--dim", sa.dim);
  sweep->add_option("--budget", sa.budget);
  sweep->add_option("--trials", sa.trials);

  // --explain must work without the subcommand's required options.
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--explain") {
      for (int j = 1; j < argc; ++j) {
        if (auto it = kExplain.find(argv[j]); it != kExplain.end()) {
          std::cout << it->second << '\n';
          return 0;
        }
      }
      for (const auto& [name, text] : kExplain) std::cout << text << "\n\n";
      return 0;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*transform) return run_transform(ta, g);
    if (*verify) return run_verify(va, g);
    if (*construct) return run_construct(ca, g);
    if (*phi_cmd) return run_phi(pa, g);
    if (*lambda) return run_lambda(la, g);
    if (*rec) return run_recover(ra, g);
    if (*sweep) return run_sweep(sa, g);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
