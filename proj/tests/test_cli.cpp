#include "doctest.h"

#include "commands.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "domlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = domlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& contents) {
  fs::path dir = fs::temp_directory_path() / "domlab_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << contents;
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("malformed JSON is invalid input") {
  auto cfg = temp_file("bad.json", "{\"genus\": 2,");
  auto r = run({"divisor", "decide", "--config", cfg.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("invalid-input") != std::string::npos);
}

TEST_CASE("unknown subcommand and missing config") {
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"divisor", "decide"}).code == 2);
  CHECK(run({"--tol", "-1", "ads", "geodesic"}).code == 2);
}

TEST_CASE("divisor decisions") {
  auto cfg = temp_file("thm_c.json", R"({"genus": 2, "phi": {"divisor": {"p": 2, "q": 2}},
                                         "D1": {"p": 1}, "D2": {}, "request": "thm_c"})");
  auto r = run({"divisor", "decide", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(r.doc()["dominates"] == true);

  auto bad = temp_file("pre.json", R"({"genus": 2, "phi": {"zero": true}, "D1": {"p": 2}, "D2": {}})");
  auto e = run({"divisor", "decide", "--config", bad.string()});
  CHECK(e.code == 2);
  CHECK(e.doc().contains("clause"));
  CHECK(e.err.find("clause") != std::string::npos);
}

TEST_CASE("divisor enumeration") {
  auto cfg = temp_file("enum.json", R"({"genus": 2, "phi": {"zero": true}, "D1": {"p": 1, "q": 1}, "k": 1})");
  auto r = run({"divisor", "enumerate", "--config", cfg.string()});
  CHECK(r.code == 0);
  auto doc = r.doc();
  CHECK(doc["count"] == 2);
  CHECK(doc["divisors"].size() == 2);
}

TEST_CASE("Liouville solve reports its error and writes the CSV") {
  auto cfg = temp_file("liouville.json", R"({"grid": {"n": 65}, "metric": "flat",
                                             "boundary": "zero", "reference": "liouville"})");
  auto csv = fs::temp_directory_path() / "domlab_cli_test" / "liouville.csv";
  auto r = run({"bochner", "solve", "--config", cfg.string(), "--out", csv.string()});
  CHECK(r.code == 0);
  CHECK(r.doc()["max_error"].get<double>() < 2e-3);
  CHECK(r.doc()["converged"] == true);
  CHECK(first_line(csv) == "x,y,s,u,H,L,J,residual");

  auto strict = temp_file("liouville_strict.json", R"({"grid": {"n": 17}, "reference": "liouville",
                                                        "max_error_tol": 1e-12})");
  CHECK(run({"bochner", "solve", "--config", strict.string()}).code == 1);
}

TEST_CASE("solver failure exits with 1") {
  auto cfg = temp_file("fail.json", R"({"grid": {"n": 33}, "max_iter": 1})");
  auto r = run({"bochner", "solve", "--config", cfg.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("solver-failure") != std::string::npos);
}

TEST_CASE("comparison with equal divisors is a hypothesis violation") {
  auto cfg = temp_file("cmp_eq.json", R"({"grid": {"n": 33},
      "phi": {"leading": [0.5, 0], "roots": [{"z": [0.25, 0], "m": 2}]},
      "D1": [{"z": [0.25, 0], "m": 1}], "D2": [{"z": [0.25, 0], "m": 1}]})");
  auto r = run({"bochner", "compare", "--config", cfg.string()});
  CHECK(r.code == 2);
  CHECK(r.doc()["error"] == "hypothesis-violation");

  auto ok = temp_file("cmp_ok.json", R"({"grid": {"n": 33},
      "phi": {"leading": [0.5, 0], "roots": [{"z": [0.25, 0], "m": 2}]},
      "D1": [{"z": [0.25, 0], "m": 1}], "D2": []})");
  auto good = run({"bochner", "compare", "--config", ok.string()});
  CHECK(good.code == 0);
  CHECK(good.doc()["strict"] == true);
}

TEST_CASE("counterexample experiment is the verified outcome") {
  auto cfg = temp_file("two_sided.json", R"({"grid": {"n": 65},
      "phi": {"leading": [1, 0], "roots": [{"z": [-0.5, 0], "m": 3}, {"z": [0.5, 0], "m": 1}]},
      "D1": [{"z": [-0.5, 0], "m": 1}, {"z": [0.5, 0], "m": 1}], "D2": [{"z": [0.5, 0], "m": 1}],
      "expect": {"dominates_fh": false, "dominates_hf": false}})");
  auto r = run({"bochner", "experiment", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(r.doc()["dominates_fh"] == false);
  CHECK(r.doc()["dominates_hf"] == false);
}

TEST_CASE("field analysis") {
  auto cfg = temp_file("field.json", R"({"grid": {"radius": 0.5, "n": 33}, "metric": "hyperbolic",
                                         "map": {"kind": "power", "m": 1}, "h": {"kind": "power", "m": 1}})");
  auto csv = fs::temp_directory_path() / "domlab_cli_test" / "field.csv";
  auto r = run({"field", "analyze", "--config", cfg.string(), "--out", csv.string()});
  CHECK(r.code == 0);
  CHECK(r.doc()["max_H"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(first_line(csv) == "x,y,H,L,e,J,re_phi,im_phi");
}

TEST_CASE("ads commands") {
  auto g = run({"ads", "geodesic"});
  CHECK(g.code == 0);
  CHECK(std::abs(g.doc()["length"].get<double>() - kPi) < 1e-8);
  auto l = run({"ads", "lift"});
  CHECK(l.code == 0);
  CHECK(l.doc()["d_theta"].get<double>() == doctest::Approx(2 * kPi));
}

TEST_CASE("holonomy commands") {
  auto m = run({"holonomy", "meridian", "--n", "2", "--f", "const0", "--r0", "0.5", "--samples", "4096"});
  CHECK(m.code == 0);
  auto doc = m.doc();
  CHECK(std::abs(doc["theta0"].get<double>() - 4 * kPi) < 1e-6);
  CHECK(doc["n"] == 2);
  CHECK(doc["domination"] == "ok");

  auto same = run({"holonomy", "meridian", "--n", "1", "--f", "identityish"});
  CHECK(same.code == 2);
  CHECK(same.doc()["clause"] == "domination");

  auto fiber = run({"holonomy", "fiber"});
  CHECK(fiber.code == 0);
  CHECK(std::abs(fiber.doc()["d_eta"].get<double>() - 2 * kPi) < 1e-6);

  auto torus = run({"holonomy", "torus"});
  CHECK(torus.code == 0);
  CHECK(run({"holonomy", "meridian", "--r0", "1.5"}).code == 2);
}
