#include "spectral/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spectral/errors.hpp"

namespace spectral::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw DataError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + name + "' has the wrong type");
  }
}

json complex_values(std::span<const Complex> values) {
  json arr = json::array();
  for (auto v : values) arr.push_back({v.real(), v.imag()});
  return arr;
}

std::vector<Complex> read_values(const json& arr, std::size_t expected) {
  if (!arr.is_array()) throw DataError("field 'values' must be an array");
  if (arr.size() != expected) {
    throw DataError("expected " + std::to_string(expected) + " values, got " + std::to_string(arr.size()));
  }
  std::vector<Complex> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw DataError("each value must be a [re, im] pair");
    }
    out.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  return out;
}

std::string grid_function_to_json(const GridShape& shape, const char* domain, std::span<const Complex> values) {
  json j;
  j["modulus"] = shape.modulus();
  j["dim"] = shape.dim();
  j["domain"] = domain;
  j["values"] = complex_values(values);
  return j.dump();
}

std::pair<GridShape, std::vector<Complex>> grid_function_from_json(const std::string& text, const char* domain) {
  const auto j = parse(text);
  const auto tag = field<std::string>(j, "domain");
  if (tag != domain) throw DataError("expected domain '" + std::string(domain) + "', got '" + tag + "'");
  GridShape shape(field<std::uint64_t>(j, "modulus"), field<std::size_t>(j, "dim"));
  return {shape, read_values(j.at("values"), shape.size())};
}

json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string signal_to_json(const Signal& f) { return grid_function_to_json(f.shape(), "space", f.values()); }

std::string spectrum_to_json(const Spectrum& F) { return grid_function_to_json(F.shape(), "freq", F.values()); }

Signal signal_from_json(const std::string& text) {
  auto [shape, values] = grid_function_from_json(text, "space");
  return Signal(shape, std::move(values));
}

Spectrum spectrum_from_json(const std::string& text) {
  auto [shape, values] = grid_function_from_json(text, "freq");
  return Spectrum(shape, std::move(values));
}

std::string set_to_json(const FreqSet& S) {
  json j;
  j["modulus"] = S.shape().modulus();
  j["dim"] = S.shape().dim();
  j["members"] = std::vector<Index>(S.members().begin(), S.members().end());
  return j.dump();
}

FreqSet set_from_json(const std::string& text) {
  const auto j = parse(text);
  GridShape shape(field<std::uint64_t>(j, "modulus"), field<std::size_t>(j, "dim"));
  return FreqSet(shape, field<std::vector<Index>>(j, "members"));
}

std::string report_to_json(const InequalityReport& r) {
  json j;
  j["which"] = to_string(r.which);
  j["p"] = r.p.is_finite() ? json(r.p.value()) : json("inf");
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack_ratio"] = number_or_inf(r.slack_ratio);
  j["grid"] = {{"N", r.grid.modulus()}, {"d", r.grid.dim()}};
  j["set_size"] = r.set_size;
  j["holds"] = r.holds;
  return j.dump(2);
}

std::string problem_to_json(const RecoveryProblem& problem) {
  json j;
  j["grid"] = problem.shape().to_string();
  j["p"] = problem.p().value();
  j["delta"] = problem.delta();
  j["c_size"] = problem.c_size();
  j["hidden"] = std::vector<Index>(problem.hidden().members().begin(), problem.hidden().members().end());
  json observed = json::array();
  for (Index m = 0; m < problem.observed().size(); ++m) {
    if (problem.hidden().contains(m)) {
      observed.push_back(nullptr);
    } else {
      const auto v = problem.observed()[m];
      observed.push_back({v.real(), v.imag()});
    }
  }
  j["observed"] = std::move(observed);
  if (!problem.alphabet().empty()) j["alphabet"] = problem.alphabet();
  return j.dump();
}

RecoveryProblem problem_from_json(const std::string& text, std::vector<double> alphabet) {
  const auto j = parse(text);
  const auto shape = GridShape::parse(field<std::string>(j, "grid"));
  Exponent p = j.contains("p") && j.at("p").is_string() ? Exponent::parse(j.at("p").get<std::string>())
                                                        : Exponent(field<double>(j, "p"));
  const auto delta = field<double>(j, "delta");
  std::optional<double> c_size;
  if (j.contains("c_size") && !j.at("c_size").is_null()) c_size = field<double>(j, "c_size");
  FreqSet hidden(shape, field<std::vector<Index>>(j, "hidden"));
  const auto& obs = j.at("observed");
  if (!obs.is_array() || obs.size() != shape.size()) {
    throw DataError("field 'observed' must list " + std::to_string(shape.size()) + " entries");
  }
  std::vector<Complex> values(shape.size());
  for (Index m = 0; m < shape.size(); ++m) {
    const auto& v = obs[m];
    if (v.is_null()) {
      if (!hidden.contains(m)) throw DataError("observed entry " + std::to_string(m) + " is null but not hidden");
      continue;
    }
    if (!v.is_array() || v.size() != 2) throw DataError("observed entries must be [re, im] or null");
    if (!hidden.contains(m)) values[m] = Complex(v[0].get<double>(), v[1].get<double>());
  }
  if (alphabet.empty() && j.contains("alphabet")) alphabet = field<std::vector<double>>(j, "alphabet");
  return RecoveryProblem(Spectrum(shape, std::move(values)), hidden, p, delta, c_size, std::move(alphabet));
}

std::string CsvTable::body() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& h : header_lines) out += "# " + h + "\n";
  return out + body();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spectral::io
