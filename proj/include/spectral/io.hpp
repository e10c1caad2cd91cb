#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spectral/fourier.hpp"
#include "spectral/inequalities.hpp"
#include "spectral/recovery.hpp"

namespace spectral::io {

/// {modulus, dim, domain: "space" | "freq", values: [[re, im], ...]}
std::string signal_to_json(const Signal& f);
std::string spectrum_to_json(const Spectrum& F);
/// Throws DataError on a malformed document or the wrong domain tag.
Signal signal_from_json(const std::string& text);
Spectrum spectrum_from_json(const std::string& text);

/// {modulus, dim, members: [linear indices]}
std::string set_to_json(const FreqSet& S);
FreqSet set_from_json(const std::string& text);

/// {which, p, lhs, rhs, slack_ratio, grid: {N, d}, set_size, holds}.
/// Infinite p and slack_ratio are written as the string "inf".
std::string report_to_json(const InequalityReport& r);

/// {grid: "NxD", p, delta, c_size, hidden: [...], observed: [[re, im] | null]}
std::string problem_to_json(const RecoveryProblem& problem);
RecoveryProblem problem_from_json(const std::string& text, std::vector<double> alphabet = {});

/// CSV with '#'-prefixed header lines ahead of the body. The body depends
/// only on the rows, so identical runs give identical bodies.
struct CsvTable {
  std::vector<std::string> header_lines;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string body() const;
  std::string str() const;
};

/// Shortest decimal that round-trips the double ("inf"/"nan" spelled out).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes via a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace spectral::io
