#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csym/cli.hpp"
#include "csym/json_io.hpp"
#include "csym/models.hpp"
#include "csym/random.hpp"
#include "csym/symmetry.hpp"

using namespace csym;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("csym_cli_" + std::to_string(mix_seed(reinterpret_cast<std::uintptr_t>(this))));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

struct RunResult {
  int code;
  std::string out, err;
};

RunResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cso_tool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

CMatrix obstructed_3x3() {
  for (std::uint64_t k = 0;; ++k) {
    Rng rng(derive_seed(0xB0, k));
    const CMatrix t = gaussian_matrix(3, rng);
    if (trace_defect(t, obstruction_polynomials()) > 1e-6) return t;
  }
}

}  // namespace

TEST_CASE("certify on a Jordan block") {
  const auto o = cli::cmd_certify(jordan_block(2, 0.0).t);
  CHECK(o.exit_code == cli::kOk);
  CHECK(o.report["find_conjugation"]["found"] == true);
  CHECK(o.report["find_conjugation"]["residual"].get<double>() <= 1e-9);
  CHECK(o.report["irreducible"] == true);
  CHECK(o.report["commutant"]["dimension"] == 1);
  CHECK(o.report["spectrum"].size() == 2);
}

TEST_CASE("certify on a reducible diagonal") {
  const auto o = cli::cmd_certify(CMatrix::diagonal({1.0, 2.0}));
  CHECK(o.exit_code == cli::kOk);
  CHECK(o.report["find_conjugation"]["found"] == true);
  CHECK(o.report["irreducible"] == false);
  const CMatrix p = matrix_from_json(o.report["reducing_projection"]);
  CHECK((p * p - p).frobenius_norm() <= 1e-8);
  CHECK(commutator(p, CMatrix::diagonal({1.0, 2.0})).frobenius_norm() <= 1e-7);
}

TEST_CASE("certify cites the trace obstruction") {
  const auto o = cli::cmd_certify(obstructed_3x3());
  CHECK(o.report["find_conjugation"]["found"] == false);
  CHECK(o.report["obstruction"]["trace_defect"].get<double>() > 1e-6);
  CHECK(o.report["obstruction"]["certified_non_membership"] == true);
  CHECK(o.report["find_conjugation"]["verdict"] == "not complex symmetric (trace defect obstruction)");
}

TEST_CASE("certify through the command line") {
  TempDir dir;
  const auto file = dir.write("j2.json", matrix_to_json(jordan_block(2, 0.0).t).dump());
  const auto r = invoke({"certify", file});
  CHECK(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report["irreducible"] == true);

  const auto out_file = (dir.path / "report.json").string();
  CHECK(invoke({"--out", out_file, "certify", file, "--tol", "1e-8"}).code == 0);
  CHECK(slurp(out_file) == r.out);
}

TEST_CASE("malformed input exits 1") {
  TempDir dir;
  CHECK(invoke({"certify", (dir.path / "missing.json").string()}).code == 1);
  CHECK(invoke({"certify", dir.write("bad.json", "{not json")}).code == 1);
  CHECK(invoke({"certify", dir.write("shape.json", R"({"n": 2, "data": [[[1, 0]]]})")}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"experiment", "density", "--samples", "0"}).code == 1);
  CHECK(invoke({"experiment", "density", "--eps", "-1"}).code == 1);
  const auto m = dir.write("m.json", matrix_to_json(jordan_block(2, 0.0).t).dump());
  const auto s = dir.write("s.json", conjugation_to_json(Conjugation(CMatrix::flip(2))).dump());
  CHECK(invoke({"perturb", "remove", m, "--conj", s, "--lambda", "abc"}).code == 1);
  const auto wrong = dir.write("c.json", conjugation_to_json(canonical_conjugation(2)).dump());
  CHECK(invoke({"perturb", "irreducible", m, "--conj", wrong, "--eps", "0.1"}).code == 1);
}

TEST_CASE("ambiguous commutant exits 2") {
  TempDir dir;
  const auto file = dir.write("amb.json", matrix_to_json(CMatrix::diagonal({0.0, 5e-9, 2e-8})).dump());
  CHECK(invoke({"certify", file}).code == 2);
}

TEST_CASE("perturb commands") {
  TempDir dir;
  const auto jb = jordan_block(2, 0.0);
  const auto m = dir.write("m.json", matrix_to_json(jb.t).dump());
  const auto s = dir.write("s.json", conjugation_to_json(jb.c).dump());

  const auto rem = invoke({"perturb", "remove", m, "--conj", s, "--lambda", "0,0", "--eps", "0.1"});
  REQUIRE(rem.code == 0);
  const json rj = json::parse(rem.out);
  const CMatrix perturbed = matrix_from_json(rj["perturbed"]);
  CHECK((perturbed - CMatrix{{0.0, 1.0}, {0.05, 0.0}}).frobenius_norm() <= 1e-16);

  const auto d = dir.write("d.json", matrix_to_json(CMatrix::diagonal({0.0, 1.0, 1.0})).dump());
  const auto c3 = dir.write("c3.json", conjugation_to_json(canonical_conjugation(3)).dump());
  const auto two = invoke({"perturb", "remove", d, "--conj", c3, "--lambda", "0,0", "--lambda", "1,0"});
  REQUIRE(two.code == 0);
  CHECK(json::parse(two.out)["norm_bound"].get<double>() < 0.1);

  const auto irr = invoke({"perturb", "irreducible", d, "--conj", c3, "--eps", "0.05"});
  REQUIRE(irr.code == 0);
  const json ij = json::parse(irr.out);
  CHECK(ij["norm_bound"].get<double>() < 0.05);
  CHECK(ij["diagnostics"]["commutant"]["dimension"] == 1);
}

TEST_CASE("density experiment") {
  cli::ExperimentConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 6;
  cfg.samples = 10;
  cfg.eps_grid = {1e-1, 1e-3};
  const auto o = cli::cmd_experiment_density(cfg);
  CHECK(o.exit_code == cli::kOk);
  const auto& agg = o.report["aggregate"];
  CHECK(agg["generic"]["success_rate"].get<double>() >= 0.99);
  CHECK(agg["generic"]["max_norm_over_eps"].get<double>() < 1.0);
  CHECK(agg["initially_reducible"] == agg["reducible_samples"]);
  CHECK(agg["reducible"]["contract_violations"] == 0);

  // Aggregates are recomputable from the records.
  std::size_t irreducible = 0, runs = 0;
  for (const auto& rec : o.report["samples"])
    for (const auto& run : rec["generic"]) {
      ++runs;
      if (run["irreducible"] == true) ++irreducible;
    }
  CHECK(agg["generic"]["runs"] == runs);
  CHECK(agg["generic"]["irreducible"] == irreducible);
}

TEST_CASE("density experiment on 1x1 samples") {
  cli::ExperimentConfig cfg;
  cfg.n_min = cfg.n_max = 1;
  cfg.samples = 1;
  const auto o = cli::cmd_experiment_density(cfg);
  CHECK(o.exit_code == cli::kOk);
  CHECK(o.report["aggregate"]["generic"]["success_rate"] == 1.0);
  CHECK(o.report["aggregate"]["reducible_samples"] == 0);
}

TEST_CASE("gnormal experiment") {
  cli::ExperimentConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 5;
  cfg.samples = 8;
  const auto o = cli::cmd_experiment_gnormal(cfg);
  CHECK(o.exit_code == cli::kOk);
  CHECK(o.report["aggregate"]["cso_pass"] == 8);
}

TEST_CASE("experiments are byte-identical across reruns") {
  const std::vector<std::string> density{"experiment", "density", "--n-min", "2", "--n-max", "5",
                                         "--samples", "4", "--eps", "0.1", "--eps", "0.001", "--seed", "9"};
  const auto a = invoke(density), b = invoke(density);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> gn{"experiment", "gnormal", "--samples", "4", "--seed", "3"};
  CHECK(invoke(gn).out == invoke(gn).out);
  auto other = density;
  other.back() = "10";
  CHECK(invoke(other).out != a.out);
}

TEST_CASE("timing is opt-in") {
  const auto plain = invoke({"experiment", "gnormal", "--samples", "1"});
  CHECK(json::parse(plain.out).contains("wall_clock_seconds") == false);
  const auto timed = invoke({"--timing", "experiment", "gnormal", "--samples", "1"});
  CHECK(json::parse(timed.out).contains("wall_clock_seconds"));
}

TEST_CASE("polys prints the standard set") {
  const auto r = invoke({"polys"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["polynomials"].size() == kStandardPolyCount);
}
