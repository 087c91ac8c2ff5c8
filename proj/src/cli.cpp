#include "csym/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csym/linalg.hpp"
#include "csym/random.hpp"

namespace csym::cli {

namespace {

constexpr double kObstructionFloor = 1e-6;

json spectrum_json(const CMatrix& t) {
  json out = json::array();
  for (const auto& z : eig_general(t)) out.push_back(complex_to_json(z));
  return out;
}

// A trace defect over the obstruction words (degree <= 8) this large cannot
// come from rounding on a C-symmetric matrix, so it certifies non-membership.
double obstruction_threshold(const CMatrix& t) {
  const double scale = std::pow(1.0 + operator_norm(t), 8);
  return std::max(kObstructionFloor, 1e-8 * static_cast<double>(t.n()) * scale);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "samples must be >= 1");
  if (n_min < 1 || n_max > 64 || n_min > n_max) throw Error(ErrorKind::InvalidInput, "n range must lie in [1, 64]");
  if (eps_grid.empty()) throw Error(ErrorKind::InvalidInput, "eps grid is empty");
  for (double e : eps_grid)
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorKind::InvalidInput, "every eps must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
}

Outcome cmd_certify(const CMatrix& t, double tol) {
  require_square(t, "certify");
  require_finite(t, "certify");
  Outcome o;
  json& r = o.report;
  r["command"] = "certify";
  r["n"] = t.n();
  r["tol"] = tol;

  const FindResult found = find_conjugation(t);
  json fc{{"found", found.found()}, {"solution_dim", found.solution_dim}, {"best_residual", found.best_residual}};
  if (found.found()) {
    fc["residual"] = found.certificate->residual;
    fc["conjugation_s"] = conjugation_to_json(found.certificate->conjugation);
  }

  const auto& polys = standard_polynomials();
  const double td = trace_defect(t, polys);
  const double gd = gnormal_defect(t, polys);
  const double od = trace_defect(t, obstruction_polynomials());
  const double obstruction = obstruction_threshold(t);
  const bool obstructed = od > obstruction;
  r["trace_defect"] = td;
  r["gnormal_defect"] = gd;
  r["obstruction"] = json{{"trace_defect", od}, {"threshold", obstruction}, {"certified_non_membership", obstructed}};
  if (!found.found())
    fc["verdict"] = obstructed ? "not complex symmetric (trace defect obstruction)" : "inconclusive";
  else if (obstructed)
    fc["verdict"] = "conflict: certificate found despite trace defect obstruction";
  else
    fc["verdict"] = "complex symmetric";
  r["find_conjugation"] = std::move(fc);

  const CommutantReport cr = commutant_dimension(t, tol);
  r["commutant"] = commutant_to_json(cr);
  if (cr.ambiguous) {
    r["irreducible"] = nullptr;
    o.exit_code = kNumericalFailure;
  } else {
    r["irreducible"] = cr.dimension == 1;
    if (cr.dimension > 1) {
      try {
        const auto p = reducing_projection(t, tol);
        r["reducing_projection"] = p ? matrix_to_json(*p) : json(nullptr);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericalAmbiguity) throw;
        r["reducing_projection"] = nullptr;
        o.exit_code = kNumericalFailure;
      }
    }
  }
  r["spectrum"] = spectrum_json(t);
  return o;
}

Outcome cmd_perturb_irreducible(const CMatrix& t, const Conjugation& c, double eps) {
  Outcome o;
  const PerturbationResult res = make_irreducible_cso(t, c, eps);
  o.report = perturbation_to_json(res);
  o.report["command"] = "perturb irreducible";
  o.report["eps"] = eps;
  const auto& cm = res.irreducible->commutant;
  if (cm && (cm->ambiguous || cm->dimension != 1)) o.exit_code = kNumericalFailure;
  return o;
}

Outcome cmd_perturb_remove(const CMatrix& t, const Conjugation& c, const std::vector<cplx>& lambdas, double eps) {
  Outcome o;
  PerturbationResult res = lambdas.size() == 1 ? remove_point(t, c, lambdas.front(), eps)
                                               : remove_points(t, c, lambdas, eps);
  o.report = perturbation_to_json(res);
  o.report["command"] = "perturb remove";
  o.report["eps"] = eps;
  o.report["spectrum_after"] = spectrum_json(res.perturbed);
  return o;
}

namespace {

struct ArmStats {
  std::size_t runs = 0, irreducible = 0, ambiguous = 0, violations = 0;
  double max_norm_ratio = 0.0, max_residual = 0.0;

  json to_json() const {
    return json{{"runs", runs},
                {"irreducible", irreducible},
                {"ambiguous", ambiguous},
                {"contract_violations", violations},
                {"success_rate", runs ? static_cast<double>(irreducible) / static_cast<double>(runs) : 1.0},
                {"max_norm_over_eps", max_norm_ratio},
                {"max_residual", max_residual}};
  }
};

json perturb_record(const CMatrix& t, const Conjugation& c, double eps, double tol, ArmStats& stats) {
  json rec{{"eps", eps}};
  ++stats.runs;
  try {
    IrreducibleOptions opts;
    opts.commutant_tol = tol;
    const PerturbationResult r = make_irreducible_cso(t, c, eps, opts);
    const auto& cm = *r.irreducible->commutant;
    const bool strict = r.norm_bound < eps;
    const bool certified = r.certificate.residual <= kCertificateTol;
    const bool irreducible = !cm.ambiguous && cm.dimension == 1;
    rec["norm_k"] = r.norm_bound;
    rec["norm_strict"] = strict;
    rec["residual"] = r.certificate.residual;
    rec["commutant"] = commutant_to_json(cm);
    rec["irreducible"] = irreducible;
    stats.max_norm_ratio = std::max(stats.max_norm_ratio, r.norm_bound / eps);
    stats.max_residual = std::max(stats.max_residual, r.certificate.residual);
    if (irreducible) ++stats.irreducible;
    if (cm.ambiguous) ++stats.ambiguous;
    const bool violation = !strict || !certified || (!irreducible && !cm.ambiguous);
    if (violation) ++stats.violations;
    rec["contract_ok"] = !violation;
  } catch (const Error& e) {
    rec["error"] = e.what();
    rec["contract_ok"] = false;
    ++stats.violations;
  }
  return rec;
}

json config_json(const ExperimentConfig& c, const char* kind) {
  return json{{"experiment", kind}, {"n_min", c.n_min}, {"n_max", c.n_max}, {"samples", c.samples},
              {"eps", c.eps_grid},  {"seed", c.seed},   {"tol", c.tol}};
}

}  // namespace

Outcome cmd_experiment_density(const ExperimentConfig& config) {
  config.validate();
  Outcome o;
  ArmStats generic, reducible;
  std::size_t initially_reducible = 0, reducible_samples = 0;
  json records = json::array();
  for (int i = 0; i < config.samples; ++i) {
    const std::uint64_t sample_seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    Rng rng(sample_seed);
    const auto n = static_cast<std::size_t>(rng.uniform_int(config.n_min, config.n_max));
    json rec{{"index", i}, {"n", n}};

    const CsoPair g = random_cso(n, derive_seed(sample_seed, 1));
    json runs = json::array();
    for (double eps : config.eps_grid) runs.push_back(perturb_record(g.t, g.c, eps, config.tol, generic));
    rec["generic"] = std::move(runs);

    if (n >= 2) {
      ++reducible_samples;
      const CsoPair red = random_reducible_cso(n, derive_seed(sample_seed, 2));
      json arm;
      bool reducible_now = false;
      try {
        const auto p = reducing_projection(red.t, config.tol);
        reducible_now = p && commutator(*p, red.t).frobenius_norm() <= 1e-7 * (1.0 + red.t.frobenius_norm());
      } catch (const Error& e) {
        arm["projection_error"] = e.what();
      }
      if (reducible_now) ++initially_reducible;
      arm["initially_reducible"] = reducible_now;
      json rruns = json::array();
      for (double eps : config.eps_grid) rruns.push_back(perturb_record(red.t, red.c, eps, config.tol, reducible));
      arm["runs"] = std::move(rruns);
      rec["reducible"] = std::move(arm);
    }
    records.push_back(std::move(rec));
  }

  json& r = o.report;
  r["command"] = config_json(config, "density");
  r["samples"] = std::move(records);
  r["aggregate"] = json{{"generic", generic.to_json()},
                        {"reducible", reducible.to_json()},
                        {"reducible_samples", reducible_samples},
                        {"initially_reducible", initially_reducible}};
  if (generic.violations + reducible.violations > 0 || initially_reducible != reducible_samples)
    o.exit_code = kNumericalFailure;
  return o;
}

Outcome cmd_experiment_gnormal(const ExperimentConfig& config) {
  config.validate();
  Outcome o;
  const auto& polys = standard_polynomials();
  json records = json::array();
  std::size_t cso_pass = 0, counter_obstructed = 0, counter_not_found = 0;
  double max_gd = 0.0, max_td_ratio = 0.0;
  for (int i = 0; i < config.samples; ++i) {
    const std::uint64_t sample_seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    Rng rng(sample_seed);
    const auto n = static_cast<std::size_t>(rng.uniform_int(config.n_min, config.n_max));
    const CsoPair g = random_cso(n, derive_seed(sample_seed, 1));
    const double gd = gnormal_defect(g.t, polys);
    const double td = trace_defect(g.t, polys);
    const double td_bound = 1e-10 * static_cast<double>(n) * std::pow(1.0 + operator_norm(g.t), 4);
    const bool pass = gd <= 1e-8 && td <= td_bound;
    if (pass) ++cso_pass;
    max_gd = std::max(max_gd, gd);
    max_td_ratio = std::max(max_td_ratio, td / td_bound);

    Rng crng(derive_seed(sample_seed, 2));
    const CMatrix counter = gaussian_matrix(n, crng);
    const double ctd = trace_defect(counter, obstruction_polynomials());
    const bool obstructed = ctd > obstruction_threshold(counter);
    const bool found = find_conjugation(counter).found();
    if (obstructed) ++counter_obstructed;
    if (obstructed && !found) ++counter_not_found;
    records.push_back(json{{"index", i},
                           {"n", n},
                           {"cso", {{"gnormal_defect", gd}, {"trace_defect", td}, {"trace_bound", td_bound}, {"pass", pass}}},
                           {"counter", {{"trace_defect", ctd}, {"obstructed", obstructed}, {"found", found}}}});
  }
  json& r = o.report;
  r["command"] = config_json(config, "gnormal");
  r["samples"] = std::move(records);
  r["aggregate"] = json{{"cso_pass", cso_pass},
                        {"max_gnormal_defect", max_gd},
                        {"max_trace_defect_over_bound", max_td_ratio},
                        {"counter_obstructed", counter_obstructed},
                        {"counter_obstructed_not_found", counter_not_found}};
  if (cso_pass != static_cast<std::size_t>(config.samples) || counter_not_found != counter_obstructed)
    o.exit_code = kNumericalFailure;
  return o;
}

namespace {

cplx parse_lambda(const std::string& s) {
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    const double re = std::stod(s.substr(0, comma), &used);
    double im = 0.0;
    if (comma != std::string::npos) im = std::stod(s.substr(comma + 1));
    return {re, im};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "cannot parse --lambda value '" + s + "' (expected RE,IM)");
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidSpec:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFinite:
    case ErrorKind::NotCSymmetric:
    case ErrorKind::EpsTooSmall:
      return kInputError;
    default:
      return kNumericalFailure;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex symmetric matrix certification and perturbation tool", "cso_tool"};
  app.require_subcommand(1);
  std::string out_path;
  bool timing = false;
  app.add_option("--out", out_path, "Write the JSON report to this file instead of stdout");
  app.add_flag("--timing", timing, "Include wall-clock seconds in the report (breaks byte-identical reruns)");

  std::string matrix_path, conj_path;
  double tol = kCommutantTol;
  double eps = 0.1;
  std::vector<std::string> lambda_strs;

  auto* certify = app.add_subcommand("certify", "Certify complex symmetry and irreducibility of a matrix");
  certify->add_option("file", matrix_path, "Matrix JSON file")->required();
  certify->add_option("--tol", tol, "Commutant dimension threshold")->capture_default_str();

  auto* perturb = app.add_subcommand("perturb", "Complex-symmetry-preserving perturbations");
  perturb->require_subcommand(1);
  auto* irr = perturb->add_subcommand("irreducible", "Perturb to an irreducible complex symmetric matrix");
  irr->add_option("file", matrix_path, "Matrix JSON file")->required();
  irr->add_option("--conj", conj_path, "Conjugation (s matrix) JSON file")->required();
  irr->add_option("--eps", eps, "Norm budget")->required();
  auto* rem = perturb->add_subcommand("remove", "Remove spectral points");
  rem->add_option("file", matrix_path, "Matrix JSON file")->required();
  rem->add_option("--conj", conj_path, "Conjugation (s matrix) JSON file")->required();
  rem->add_option("--lambda", lambda_strs, "Point to remove as RE,IM (repeatable)")->required();
  rem->add_option("--eps", eps, "Norm budget")->capture_default_str();

  ExperimentConfig config;
  auto* exp = app.add_subcommand("experiment", "Seeded batch experiments");
  exp->require_subcommand(1);
  auto add_config = [&config](CLI::App* sub) {
    sub->add_option("--n-min", config.n_min)->capture_default_str();
    sub->add_option("--n-max", config.n_max)->capture_default_str();
    sub->add_option("--samples", config.samples)->capture_default_str();
    sub->add_option("--eps", config.eps_grid)->capture_default_str();
    sub->add_option("--seed", config.seed)->capture_default_str();
    sub->add_option("--tol", config.tol)->capture_default_str();
  };
  auto* density = exp->add_subcommand("density", "Irreducible complex symmetric matrices are dense");
  auto* gnormal = exp->add_subcommand("gnormal", "g-normality and trace defects of complex symmetric matrices");
  add_config(density);
  add_config(gnormal);

  auto* polys = app.add_subcommand("polys", "Print the standard defect polynomial set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (*certify) {
      outcome = cmd_certify(read_matrix_file(matrix_path), tol);
    } else if (*irr) {
      outcome = cmd_perturb_irreducible(read_matrix_file(matrix_path), conjugation_from_json(read_json_file(conj_path)), eps);
    } else if (*rem) {
      std::vector<cplx> lambdas;
      for (const auto& s : lambda_strs) lambdas.push_back(parse_lambda(s));
      outcome = cmd_perturb_remove(read_matrix_file(matrix_path), conjugation_from_json(read_json_file(conj_path)),
                                   lambdas, eps);
    } else if (*density) {
      outcome = cmd_experiment_density(config);
    } else if (*gnormal) {
      outcome = cmd_experiment_gnormal(config);
    } else if (*polys) {
      json list = json::array();
      for (const auto& p : standard_polynomials()) list.push_back(polynomial_to_json(p));
      outcome.report = json{{"seed", kStandardPolySeed}, {"polynomials", std::move(list)}};
    }
  } catch (const BudgetExhausted& e) {
    outcome.report = json{{"error", e.what()}, {"partial", perturbation_to_json(e.partial())}};
    outcome.exit_code = kNumericalFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kNumericalFailure;
  }

  if (timing)
    outcome.report["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kInputError;
    }
    f << text;
  }
  return outcome.exit_code;
}

}  // namespace csym::cli
