#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "spectral/constructions.hpp"
#include "spectral/errors.hpp"
#include "spectral/io.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

TEST_CASE("signal and spectrum files round-trip") {
  GridShape g(5, 2);
  Rng rng(2);
  std::vector<Complex> v(g.size());
  for (auto& x : v) x = Complex(rng.normal(), rng.normal());
  const Signal f(g, v);
  const auto back = io::signal_from_json(io::signal_to_json(f));
  CHECK(back.shape() == g);
  for (Index i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);

  const auto F = forward(f);
  const auto Fb = io::spectrum_from_json(io::spectrum_to_json(F));
  for (Index i = 0; i < g.size(); ++i) CHECK(Fb[i] == F[i]);

  CHECK_THROWS_AS(io::spectrum_from_json(io::signal_to_json(f)), DataError);
  CHECK_THROWS_AS(io::signal_from_json("{\"modulus\": 4, \"dim\": 1, \"domain\": \"space\", \"values\": [[1,0]]}"),
                  DataError);
  CHECK_THROWS_AS(io::signal_from_json("not json"), DataError);
}

TEST_CASE("set files round-trip") {
  const auto S = random_set(GridShape(7, 2), 9, 4);
  CHECK(io::set_from_json(io::set_to_json(S)) == S);
  CHECK_THROWS_AS(io::set_from_json("{\"modulus\": 4, \"dim\": 1, \"members\": [9]}"), DomainError);
}

TEST_CASE("report serialization spells infinity") {
  GridShape g(4, 1);
  const auto r = verify_indicator_dual_bound(Signal::zeros(g), FreqSet(g, {1}), Exponent::infinity());
  const auto j = nlohmann::json::parse(io::report_to_json(r));
  CHECK(j["p"] == "inf");
  CHECK(j["slack_ratio"] == "inf");
  CHECK(j["grid"]["N"] == 4);
  CHECK(j["which"] == "indicator-dual");
  CHECK(j["holds"] == true);
}

TEST_CASE("problem files round-trip with null hidden entries") {
  GridShape g(8, 1);
  const Signal f(g, {1, 0, 0, 1, 0, 1, 0, 0});
  auto masked = mask_spectrum(forward(f), FreqSet(g, {2, 6}));
  const RecoveryProblem p(masked.observed, masked.hidden, Exponent(2), 1.0, std::nullopt, {0, 1});
  const auto text = io::problem_to_json(p);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["observed"][2].is_null());
  CHECK(j["grid"] == "8x1");
  const auto q = io::problem_from_json(text);
  CHECK(q.hidden() == p.hidden());
  CHECK(q.c_size() == doctest::Approx(p.c_size()));
  CHECK(q.alphabet() == p.alphabet());
  for (Index m = 0; m < 8; ++m) CHECK(q.observed()[m] == p.observed()[m]);

  auto broken = j;
  broken["observed"][3] = nullptr;
  CHECK_THROWS_AS(io::problem_from_json(broken.dump()), DataError);
}

TEST_CASE("csv body excludes header lines") {
  io::CsvTable t;
  t.header_lines = {"config x", "generated now"};
  t.columns = {"a", "b"};
  t.rows = {{"1", "2"}};
  CHECK(t.body() == "a,b\n1,2\n");
  CHECK(t.str() == "# config x\n# generated now\na,b\n1,2\n");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(INFINITY) == "inf");
}

TEST_CASE("atomic writes leave no temp file") {
  const auto dir = std::filesystem::temp_directory_path() / "spectral_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "hello\n");
  CHECK(io::read_file(path) == "hello\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(io::read_file(dir / "missing"), DataError);
}
