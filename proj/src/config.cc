#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fcopt/experiments.hpp"

namespace fcopt {

namespace {

std::string where(const YAML::Node& node, const std::string& field) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return "field '" + field + "'";
  return "line " + std::to_string(mark.line + 1) + ", field '" + field + "'";
}

template <typename T>
T read(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(node, field) + ": cannot parse value '" +
                      (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
  }
}

template <typename T>
void read_into(const YAML::Node& parent, const std::string& key, const std::string& path, T& out) {
  if (const YAML::Node node = parent[key]) out = read<T>(node, path);
}

template <typename T>
void read_into(const YAML::Node& parent, const std::string& key, const std::string& path,
               std::optional<T>& out) {
  if (const YAML::Node node = parent[key]) out = read<T>(node, path);
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(where(kv.first, prefix + key) + ": unknown key");
  }
}

YAML::Node table(const YAML::Node& root, const std::string& key) {
  const YAML::Node node = root[key];
  if (node && !node.IsMap()) throw ConfigError(where(node, key) + ": expected a table");
  return node;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (family != "simplex" && family != "matcomp" && family != "custom")
    throw ConfigError("family must be simplex, matcomp or custom, got '" + family + "'");
  if (d == 0 || n == 0 || m == 0 || r == 0) throw ConfigError("dimensions must be positive");
  if (family == "simplex" && (n < 2 || d < std::max<std::size_t>(n, 3)))
    throw ConfigError("simplex family needs n >= 2 and d >= max(n, 3)");
  if (family == "matcomp" && r > std::min(d, m)) throw ConfigError("matcomp family needs r <= min(d, m)");
  if (!(density > 0.0 && density <= 1.0)) throw ConfigError("density must lie in (0, 1]");
  if (methods.empty()) throw ConfigError("methods list is empty");
  for (const auto& mth : methods)
    if (mth != "basic" && mth != "accelerated" && mth != "subgradient")
      throw ConfigError("unknown method '" + mth + "' (basic, accelerated, subgradient)");
  if (max_iter < 0) throw ConfigError("max_iter must be nonnegative");
  if (!(max_seconds > 0.0)) throw ConfigError("max_seconds must be positive");
  if (!(subproblem_tol > 0.0)) throw ConfigError("subproblem_tol must be positive");
  if (reference_budget && *reference_budget < 1) throw ConfigError("reference_budget must be positive");
  if (basic.rule != "two_over_k_plus_two" && basic.rule != "one_over_sqrt" && basic.rule != "adaptive")
    throw ConfigError("basic.rule must be two_over_k_plus_two, one_over_sqrt or adaptive");
  if (basic.s_hat && !(*basic.s_hat > 0.0)) throw ConfigError("basic.s_hat must be positive");
  if (!(accelerated.c >= 0.0)) throw ConfigError("accelerated.c must be nonnegative");
  if (accelerated.delta && !(*accelerated.delta > 0.0))
    throw ConfigError("accelerated.delta must be positive");
  if (subgradient.p && !(*subgradient.p > 0.0)) throw ConfigError("subgradient.p must be positive");
  for (const auto* cap : {&basic.max_iter, &accelerated.max_iter, &subgradient.max_iter})
    if (*cap && **cap < 0) throw ConfigError("per-method max_iter must be nonnegative");
}

double ExperimentConfig::accelerated_delta() const {
  if (accelerated.delta) return *accelerated.delta;
  return family == "matcomp" ? 100.0 : 0.2;
}

int ExperimentConfig::effective_reference_budget() const {
  if (reference_budget) return *reference_budget;
  return family == "matcomp" ? 500 : 10000;
}

double ExperimentConfig::subgradient_p() const {
  if (subgradient.p) return *subgradient.p;
  return family == "matcomp" ? 0.2 : 1.42;
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  ExperimentConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config must be a key-value table");
  reject_unknown(root,
                 {"experiment", "d", "n", "m", "r", "density", "seed", "methods", "max_iter",
                  "max_seconds", "subproblem_tol", "reference_budget", "output", "basic",
                  "accelerated", "subgradient"},
                 "");
  read_into(root, "experiment", "experiment", c.family);
  read_into(root, "d", "d", c.d);
  read_into(root, "n", "n", c.n);
  read_into(root, "m", "m", c.m);
  read_into(root, "r", "r", c.r);
  read_into(root, "density", "density", c.density);
  read_into(root, "seed", "seed", c.seed);
  read_into(root, "max_iter", "max_iter", c.max_iter);
  read_into(root, "max_seconds", "max_seconds", c.max_seconds);
  read_into(root, "subproblem_tol", "subproblem_tol", c.subproblem_tol);
  read_into(root, "reference_budget", "reference_budget", c.reference_budget);
  read_into(root, "output", "output", c.output);
  if (const YAML::Node methods = root["methods"]) {
    if (methods.IsScalar()) {
      const std::string one = read<std::string>(methods, "methods");
      c.methods = one == "all" ? ExperimentConfig{}.methods : std::vector<std::string>{one};
    } else {
      c.methods = read<std::vector<std::string>>(methods, "methods");
    }
  }
  if (const YAML::Node b = table(root, "basic")) {
    reject_unknown(b, {"rule", "s_hat", "max_iter"}, "basic.");
    read_into(b, "rule", "basic.rule", c.basic.rule);
    read_into(b, "s_hat", "basic.s_hat", c.basic.s_hat);
    read_into(b, "max_iter", "basic.max_iter", c.basic.max_iter);
  }
  if (const YAML::Node a = table(root, "accelerated")) {
    reject_unknown(a, {"c", "delta", "max_iter"}, "accelerated.");
    read_into(a, "c", "accelerated.c", c.accelerated.c);
    read_into(a, "delta", "accelerated.delta", c.accelerated.delta);
    read_into(a, "max_iter", "accelerated.max_iter", c.accelerated.max_iter);
  }
  if (const YAML::Node s = table(root, "subgradient")) {
    reject_unknown(s, {"p", "max_iter"}, "subgradient.");
    read_into(s, "p", "subgradient.p", c.subgradient.p);
    read_into(s, "max_iter", "subgradient.max_iter", c.subgradient.max_iter);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "experiment" << YAML::Value << c.family;
  out << YAML::Key << "d" << YAML::Value << c.d;
  out << YAML::Key << "n" << YAML::Value << c.n;
  out << YAML::Key << "m" << YAML::Value << c.m;
  out << YAML::Key << "r" << YAML::Value << c.r;
  out << YAML::Key << "density" << YAML::Value << c.density;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << c.methods;
  out << YAML::Key << "max_iter" << YAML::Value << c.max_iter;
  out << YAML::Key << "max_seconds" << YAML::Value << c.max_seconds;
  out << YAML::Key << "subproblem_tol" << YAML::Value << c.subproblem_tol;
  out << YAML::Key << "reference_budget" << YAML::Value << c.effective_reference_budget();
  out << YAML::Key << "output" << YAML::Value << c.output;

  out << YAML::Key << "basic" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rule" << YAML::Value << c.basic.rule;
  if (c.basic.s_hat) out << YAML::Key << "s_hat" << YAML::Value << *c.basic.s_hat;
  if (c.basic.max_iter) out << YAML::Key << "max_iter" << YAML::Value << *c.basic.max_iter;
  out << YAML::EndMap;

  out << YAML::Key << "accelerated" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c" << YAML::Value << c.accelerated.c;
  out << YAML::Key << "delta" << YAML::Value << c.accelerated_delta();
  if (c.accelerated.max_iter) out << YAML::Key << "max_iter" << YAML::Value << *c.accelerated.max_iter;
  out << YAML::EndMap;

  out << YAML::Key << "subgradient" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "p" << YAML::Value << c.subgradient_p();
  if (c.subgradient.max_iter) out << YAML::Key << "max_iter" << YAML::Value << *c.subgradient.max_iter;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fcopt
