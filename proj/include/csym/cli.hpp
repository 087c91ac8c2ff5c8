#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "csym/json_io.hpp"

namespace csym::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

struct ExperimentConfig {
  int n_min = 2;
  int n_max = 8;
  int samples = 100;
  std::vector<double> eps_grid{1e-1, 1e-2, 1e-3};
  std::uint64_t seed = 1;
  double tol = kCommutantTol;

  /// Throws InvalidInput unless samples >= 1, every eps > 0 and
  /// 1 <= n_min <= n_max <= 64.
  void validate() const;
};

struct Outcome {
  json report;
  int exit_code = kOk;
};

Outcome cmd_certify(const CMatrix& t, double tol = kCommutantTol);
Outcome cmd_perturb_irreducible(const CMatrix& t, const Conjugation& c, double eps);
Outcome cmd_perturb_remove(const CMatrix& t, const Conjugation& c, const std::vector<cplx>& lambdas, double eps);
Outcome cmd_experiment_density(const ExperimentConfig& config);
Outcome cmd_experiment_gnormal(const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csym::cli
