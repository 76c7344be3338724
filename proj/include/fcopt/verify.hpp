#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fcopt/experiments.hpp"

namespace fcopt {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct NamedProblem {
  std::string name;
  CompositeProblem problem;
  bool convex = true;
};

/// Small instances covering every outer variant family, used by the property suites.
std::vector<NamedProblem> catalog_instances(std::uint64_t seed = kDefaultSeed);

/// Outer-function assumption suites: subhomogeneity, subadditivity, joint convexity,
/// monotonicity flags and subgradient inequality over `draws` random draws per variant.
CheckOutcome check_outer_assumptions(int draws = 1000);
/// phi(y_g) <= linearized model + gamma^2/2 * F(L D^2) on random triples per instance.
CheckOutcome check_progress_bound(int triples = 200);
CheckOutcome check_prox_rates();
CheckOutcome check_oracle_equivalence();
CheckOutcome check_gauss_newton();
CheckOutcome check_set_oracles();
CheckOutcome check_determinism();

/// Runs every acceptance criterion in order, printing one PASS/FAIL line per criterion to
/// `out` as it completes.
std::vector<CheckOutcome> run_acceptance_suite(std::ostream& out);

}  // namespace fcopt
