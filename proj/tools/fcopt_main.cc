#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fcopt/experiments.hpp"
#include "fcopt/plot.hpp"
#include "fcopt/verify.hpp"

namespace {

constexpr int kExitMethodFailure = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> experiment;
  std::vector<std::string> methods;
  std::optional<std::size_t> d, n, m, r;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
  std::optional<double> p, c, delta;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  bool verbose = false;
};

std::vector<std::string> split_methods(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part == "all") return fcopt::ExperimentConfig{}.methods;
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

fcopt::ExperimentConfig effective_config(const Overrides& o) {
  fcopt::ExperimentConfig c = o.config_path.empty() ? fcopt::ExperimentConfig{} : fcopt::load_config(o.config_path);
  if (o.experiment) c.family = *o.experiment;
  if (!o.methods.empty()) c.methods = split_methods(o.methods);
  if (o.d) c.d = *o.d;
  if (o.n) c.n = *o.n;
  if (o.m) c.m = *o.m;
  if (o.r) c.r = *o.r;
  if (o.seed) c.seed = *o.seed;
  if (o.max_iter) c.max_iter = *o.max_iter;
  if (o.p) c.subgradient.p = *o.p;
  if (o.c) c.accelerated.c = *o.c;
  if (o.delta) c.accelerated.delta = *o.delta;
  if (o.out) c.output = *o.out;
  c.verbose = o.verbose;
  c.validate();
  return c;
}

int cmd_run(const Overrides& o) {
  const fcopt::ExperimentConfig config = effective_config(o);
  if (config.output.empty()) throw fcopt::ConfigError("output directory must not be empty");
  const fcopt::ExperimentResult result = fcopt::run_experiment(config);
  std::cerr << "reference optimum " << result.reference.value << " (error bar "
            << result.reference.error_bar << ")\n";
  for (const auto& [method, trace] : result.traces) {
    std::cerr << method << ": " << fcopt::status_name(trace.status);
    if (!trace.records.empty())
      std::cerr << ", objective " << trace.records.back().objective << ", fo_calls "
                << trace.records.back().fo_calls;
    if (!trace.message.empty()) std::cerr << " (" << trace.message << ")";
    std::cerr << '\n';
  }
  if (o.svg) fcopt::plot_run_directory(config.output, *o.svg);
  return result.all_succeeded() ? 0 : kExitMethodFailure;
}

int cmd_plot(const std::string& run_dir, const Overrides& o) {
  const std::string dest = o.svg ? *o.svg : o.out ? *o.out : run_dir;
  for (const auto& path : fcopt::plot_run_directory(run_dir, dest)) std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_verify() {
  const auto outcomes = fcopt::run_acceptance_suite(std::cout);
  std::size_t passed = 0;
  for (const auto& c : outcomes) passed += c.passed ? 1 : 0;
  std::cout << passed << "/" << outcomes.size() << " criteria passed\n";
  return passed == outcomes.size() ? 0 : kExitMethodFailure;
}

void add_experiment_flags(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "YAML experiment config")->check(CLI::ExistingFile);
  app.add_option("--experiment", o.experiment, "problem family: simplex | matcomp");
  app.add_option("--method", o.methods, "basic, accelerated, subgradient or all (comma separated or repeated)");
  app.add_option("--d", o.d, "dimension (simplex) or row count (matcomp)");
  app.add_option("--n", o.n, "number of inner components");
  app.add_option("--m", o.m, "matcomp column count");
  app.add_option("--r", o.r, "matcomp rank and nuclear-ball radius");
  app.add_option("--seed", o.seed, "generator seed");
  app.add_option("--max-iter", o.max_iter, "iteration cap per method");
  app.add_option("--p", o.p, "subgradient step constant");
  app.add_option("--c", o.c, "accelerated prox weight constant");
  app.add_option("--delta", o.delta, "accelerated inexactness constant");
  app.add_option("--out", o.out, "output directory for traces");
  app.add_option("--svg", o.svg, "also render convergence plots into this directory");
  app.add_flag("--verbose", o.verbose, "per-iteration progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fcopt: projection-free fully composite optimization experiments"};
  app.require_subcommand(1);

  Overrides run_opts;
  CLI::App* run = app.add_subcommand("run", "run an experiment and write traces");
  add_experiment_flags(*run, run_opts);

  app.add_subcommand("verify", "run the property and rate acceptance suites");

  Overrides plot_opts;
  std::string plot_dir = "out";
  CLI::App* plot = app.add_subcommand("plot", "render convergence SVGs from a run directory");
  plot->add_option("run_dir", plot_dir, "directory holding <method>.csv and summary.json");
  plot->add_option("--out", plot_opts.out, "SVG destination (defaults to the run directory)");
  plot->add_option("--svg", plot_opts.svg, "SVG destination, same as --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (plot->parsed()) return cmd_plot(plot_dir, plot_opts);
    return cmd_verify();
  } catch (const fcopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMethodFailure;
  }
}
