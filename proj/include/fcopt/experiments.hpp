#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcopt/algorithms.hpp"
#include "fcopt/random.hpp"

namespace fcopt {

/// max_i x^T A_i x - b_i^T x over the simplex, A_i = Q_i D Q_i^T with eigenvalues decaying
/// linearly from 1 to 1e-6 and Haar-random Q_i; b_i = 10 e_i (i <= n-2), b_{n-1} = 0,
/// b_n = 10 * ones.
CompositeProblem gen_simplex_problem(std::size_t d, std::size_t n, std::uint64_t seed = kDefaultSeed);

/// max_i sum_{(k,l) in Omega_i} (X_kl - A^(i)_kl)^2 over {||X||_* <= r}, d x m matrices.
/// A^(i) = U_i V_i^T with standard Gaussian factors of rank r, masks i.i.d. Bernoulli(density).
CompositeProblem gen_matcomp_problem(std::size_t d, std::size_t m, std::size_t r, std::size_t n,
                                     double density = 0.5, std::uint64_t seed = kDefaultSeed);

struct ReferenceOptimum {
  double value = 0.0;        // best objective reached
  double lower_bound = 0.0;  // best certified lower bound, value - error_bar
  double error_bar = 0.0;
};

/// Best objective over a `budget`-iteration accelerated run (c = 1, delta = F(L) D^2) and a
/// `budget`-iteration basic run; the error bar comes from the basic run's certificates. The
/// accelerated run is skipped when F is not monotone or f has nonconvex components.
ReferenceOptimum reference_optimum(const CompositeProblem& problem, int budget,
                                   const DenseVector& y0);
ReferenceOptimum reference_optimum(const CompositeProblem& problem, int budget);

struct BasicSettings {
  std::string rule = "two_over_k_plus_two";  // | one_over_sqrt | adaptive
  std::optional<double> s_hat;                // adaptive rule; defaults to F(L D^2)
  std::optional<int> max_iter;
};

struct AcceleratedSettings {
  double c = 1.0;
  std::optional<double> delta;  // family default when absent
  std::optional<int> max_iter;
};

struct SubgradientSettings {
  std::optional<double> p;  // family default when absent
  std::optional<int> max_iter;
};

struct ExperimentConfig {
  std::string family = "simplex";  // simplex | matcomp | custom
  std::size_t d = 50;
  std::size_t n = 5;
  std::size_t m = 10;
  std::size_t r = 7;
  double density = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> methods = {"basic", "accelerated", "subgradient"};
  int max_iter = 500;
  double max_seconds = 300.0;
  double subproblem_tol = 1e-8;
  std::optional<int> reference_budget;  // family default when absent
  BasicSettings basic;
  AcceleratedSettings accelerated;
  SubgradientSettings subgradient;
  std::string output = "out";
  bool verbose = false;  // per-iteration stderr tick; not serialized

  // Throws ConfigError on an invalid combination.
  void validate() const;
  double accelerated_delta() const;
  double subgradient_p() const;
  int effective_reference_budget() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& yaml_text);
std::string to_yaml(const ExperimentConfig& config);

struct ExperimentResult {
  std::map<std::string, RunTrace> traces;
  ReferenceOptimum reference;
  bool all_succeeded() const;
};

CompositeProblem build_problem(const ExperimentConfig& config);
DenseVector default_start(const ExperimentConfig& config, const CompositeProblem& problem);

/// Runs every configured method from the family's start point and, when `config.output` is
/// nonempty, writes <output>/<method>.csv, summary.json and the effective config.yaml.
ExperimentResult run_experiment(const ExperimentConfig& config);
/// Same on a caller-supplied problem (the custom family).
ExperimentResult run_experiment(const ExperimentConfig& config, const CompositeProblem& problem,
                                const DenseVector& y0);

inline constexpr const char* kCsvHeader =
    "iter,objective,delta,fo_calls,oracle_calls,lmo_calls,elapsed_ms";

std::string trace_csv(const RunTrace& trace);
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path);

}  // namespace fcopt
