#include "reqo/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "reqo/errors.hpp"

namespace reqo {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T read(const json& j, const std::string& key, const std::string& where, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

template <typename T>
std::optional<T> read_optional(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read<T>(j, key, where, T{});
}

std::uint64_t read_seed(const json& j, const std::string& key, const std::string& where, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base) / path).string();
}

OracleSpec parse_oracle(const json& j) {
  require_object(j, "oracle",
                 {"kind", "b", "c", "divisor", "offset", "seed", "density", "value", "graph", "vertices", "edges",
                  "terminals", "path"});
  OracleSpec s;
  s.kind = read<std::string>(j, "kind", "oracle", s.kind);
  s.b = read<int>(j, "b", "oracle", s.b);
  s.c = read<int>(j, "c", "oracle", s.c);
  s.divisor = read<double>(j, "divisor", "oracle", s.divisor);
  s.offset = read<double>(j, "offset", "oracle", s.offset);
  s.seed = read_seed(j, "seed", "oracle", s.seed);
  s.density = read<double>(j, "density", "oracle", s.density);
  s.value = read<bool>(j, "value", "oracle", s.value);
  s.graph = read<std::string>(j, "graph", "oracle", s.graph);
  s.vertices = read<int>(j, "vertices", "oracle", s.vertices);
  s.edges = read<std::vector<std::pair<int, int>>>(j, "edges", "oracle", s.edges);
  s.terminals = read<std::pair<int, int>>(j, "terminals", "oracle", s.terminals);
  s.path = read<std::string>(j, "path", "oracle", s.path);

  static const std::set<std::string> kinds{"threshold", "planted", "single_solution", "constant", "reliability",
                                           "bitmap"};
  if (!kinds.count(s.kind)) throw ConfigError("unknown oracle kind '" + s.kind + "'");
  if (s.kind != "reliability" && s.kind != "bitmap" && (s.b < 1 || s.c < 1))
    throw ConfigError("oracle.b and oracle.c must be >= 1");
  if (s.kind == "threshold" && s.divisor == 0.0) throw ConfigError("oracle.divisor must be non-zero");
  if (s.kind == "planted" && !(s.density >= 0.0 && s.density <= 1.0))
    throw ConfigError("oracle.density must lie in [0, 1]");
  if (s.kind == "reliability" && s.graph.empty() && s.edges.empty())
    throw ConfigError("reliability oracle needs 'graph' or 'edges'");
  if (s.kind == "bitmap" && s.path.empty()) throw ConfigError("bitmap oracle needs 'path'");
  return s;
}

DistributionSpec parse_distribution(const json& j) {
  require_object(j, "distribution", {"kind", "q", "p"});
  DistributionSpec s;
  s.kind = read<std::string>(j, "kind", "distribution", s.kind);
  if (j.contains("q")) {
    if (j.at("q").is_number()) s.q = {j.at("q").get<double>()};
    else s.q = read<std::vector<double>>(j, "q", "distribution", {});
  }
  s.p = read<std::vector<double>>(j, "p", "distribution", s.p);
  if (s.kind == "iid" && s.q.empty()) throw ConfigError("iid distribution needs 'q'");
  if (s.kind == "explicit" && s.p.empty()) throw ConfigError("explicit distribution needs 'p'");
  if (s.kind != "uniform" && s.kind != "iid" && s.kind != "explicit")
    throw ConfigError("unknown distribution kind '" + s.kind + "'");
  return s;
}

AlgorithmSpec parse_algorithm(const json& j) {
  require_object(j, "algorithm",
                 {"delta", "lambda_t", "max_epsilon_t", "epsilon", "m", "l_min", "l_max", "log_base"});
  AlgorithmSpec s;
  s.delta = read<double>(j, "delta", "algorithm", s.delta);
  s.lambda_t = read_optional<double>(j, "lambda_t", "algorithm");
  s.max_epsilon_t = read_optional<double>(j, "max_epsilon_t", "algorithm");
  s.epsilon = read_optional<double>(j, "epsilon", "algorithm");
  s.m = read<int>(j, "m", "algorithm", s.m);
  s.l_min = read<int>(j, "l_min", "algorithm", s.l_min);
  s.l_max = read<int>(j, "l_max", "algorithm", s.l_max);
  const auto base = read<std::string>(j, "log_base", "algorithm", "natural");
  if (base == "natural" || base == "e") s.log_base = LogBase::natural;
  else if (base == "2" || base == "base2") s.log_base = LogBase::base2;
  else throw ConfigError("algorithm.log_base must be 'natural' or 'base2'");

  if (!(s.delta > 0.0 && s.delta < 1.0)) throw ConfigError("algorithm.delta must lie in (0, 1)");
  if (s.epsilon && !(*s.epsilon > 0.0 && *s.epsilon < 1.0)) throw ConfigError("algorithm.epsilon must lie in (0, 1)");
  if (s.lambda_t && s.max_epsilon_t) throw ConfigError("give at most one of lambda_t and max_epsilon_t");
  if (s.m < 1) throw ConfigError("algorithm.m must be >= 1");
  if (s.l_min < 0 || s.l_max < s.l_min) throw ConfigError("need 0 <= l_min <= l_max");
  return s;
}

ClassicalSpec parse_classical(const json& j) {
  require_object(j, "classical", {"N", "trials", "epsilon", "search_order"});
  ClassicalSpec s;
  s.samples = read_seed(j, "N", "classical", s.samples);
  s.trials = read_seed(j, "trials", "classical", s.trials);
  s.epsilon = read<double>(j, "epsilon", "classical", s.epsilon);
  s.order = parse_search_order(read<std::string>(j, "search_order", "classical", to_string(s.order)));
  if (s.samples < 1) throw ConfigError("classical.N must be >= 1");
  if (s.trials < 1) throw ConfigError("classical.trials must be >= 1");
  if (!(s.epsilon > 0.0)) throw ConfigError("classical.epsilon must be positive");
  return s;
}

CompareSpec parse_compare(const json& j) {
  require_object(j, "compare",
                 {"epsilons", "c_values", "scaling_b", "measure_max_c", "scaling_epsilon", "measure_max_qubits"});
  CompareSpec s;
  s.epsilons = read<std::vector<double>>(j, "epsilons", "compare", s.epsilons);
  s.c_values = read<std::vector<int>>(j, "c_values", "compare", s.c_values);
  s.scaling_b = read<int>(j, "scaling_b", "compare", s.scaling_b);
  s.measure_max_c = read<int>(j, "measure_max_c", "compare", s.measure_max_c);
  s.scaling_epsilon = read<double>(j, "scaling_epsilon", "compare", s.scaling_epsilon);
  s.measure_max_qubits = read<int>(j, "measure_max_qubits", "compare", s.measure_max_qubits);
  for (double e : s.epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("compare.epsilons entries must lie in (0, 1)");
  for (int c : s.c_values)
    if (c < 1 || c > 40) throw ConfigError("compare.c_values entries must lie in [1, 40]");
  if (s.scaling_b < 1) throw ConfigError("compare.scaling_b must be >= 1");
  if (!(s.scaling_epsilon > 0.0 && s.scaling_epsilon < 1.0))
    throw ConfigError("compare.scaling_epsilon must lie in (0, 1)");
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::string& base_dir) {
  require_object(j, "config", {"oracle", "distribution", "algorithm", "classical", "compare", "seed"});
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  if (j.contains("oracle")) cfg.oracle = parse_oracle(j.at("oracle"));
  if (j.contains("distribution")) cfg.distribution = parse_distribution(j.at("distribution"));
  if (j.contains("algorithm")) cfg.algorithm = parse_algorithm(j.at("algorithm"));
  if (j.contains("classical")) cfg.classical = parse_classical(j.at("classical"));
  if (j.contains("compare")) cfg.compare = parse_compare(j.at("compare"));
  cfg.seed = read_seed(j, "seed", "config", cfg.seed);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return from_json(j, std::filesystem::path(path).parent_path().string());
}

json ExperimentConfig::to_json() const {
  json o;
  o["kind"] = oracle.kind;
  if (oracle.kind == "threshold") {
    o["b"] = oracle.b;
    o["c"] = oracle.c;
    o["divisor"] = oracle.divisor;
    o["offset"] = oracle.offset;
  } else if (oracle.kind == "planted") {
    o["b"] = oracle.b;
    o["c"] = oracle.c;
    o["seed"] = oracle.seed;
    o["density"] = oracle.density;
  } else if (oracle.kind == "single_solution") {
    o["b"] = oracle.b;
    o["c"] = oracle.c;
    o["seed"] = oracle.seed;
  } else if (oracle.kind == "constant") {
    o["b"] = oracle.b;
    o["c"] = oracle.c;
    o["value"] = oracle.value;
  } else if (oracle.kind == "reliability") {
    if (!oracle.edges.empty()) {
      o["vertices"] = oracle.vertices;
      o["edges"] = oracle.edges;
      o["terminals"] = oracle.terminals;
    } else {
      o["graph"] = oracle.graph;
    }
  } else {
    o["path"] = oracle.path;
  }

  json d;
  d["kind"] = distribution.kind;
  if (distribution.kind == "iid") d["q"] = distribution.q;
  if (distribution.kind == "explicit") d["p"] = distribution.p;

  json a;
  a["delta"] = algorithm.delta;
  a["lambda_t"] = algorithm.lambda_t ? json(*algorithm.lambda_t) : json(nullptr);
  a["max_epsilon_t"] = algorithm.max_epsilon_t ? json(*algorithm.max_epsilon_t) : json(nullptr);
  a["epsilon"] = algorithm.epsilon ? json(*algorithm.epsilon) : json(nullptr);
  a["m"] = algorithm.m;
  a["l_min"] = algorithm.l_min;
  a["l_max"] = algorithm.l_max;
  a["log_base"] = algorithm.log_base == LogBase::natural ? "natural" : "base2";

  json c;
  c["N"] = classical.samples;
  c["trials"] = classical.trials;
  c["epsilon"] = classical.epsilon;
  c["search_order"] = to_string(classical.order);

  json k;
  k["epsilons"] = compare.epsilons;
  k["c_values"] = compare.c_values;
  k["scaling_b"] = compare.scaling_b;
  k["measure_max_c"] = compare.measure_max_c;
  k["scaling_epsilon"] = compare.scaling_epsilon;
  k["measure_max_qubits"] = compare.measure_max_qubits;

  return json{{"oracle", o}, {"distribution", d}, {"algorithm", a}, {"classical", c}, {"compare", k}, {"seed", seed}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json().dump()); }

Graph ExperimentConfig::build_graph() const {
  if (oracle.kind != "reliability") throw ConfigError("oracle kind '" + oracle.kind + "' has no graph");
  if (oracle.edges.empty()) return Graph::load(resolve(base_dir, oracle.graph));
  Graph g;
  g.vertex_count = oracle.vertices;
  g.edges = oracle.edges;
  g.source = oracle.terminals.first;
  g.target = oracle.terminals.second;
  try {
    g.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("inline graph: ") + e.what());
  }
  return g;
}

Oracle ExperimentConfig::build_oracle() const {
  const auto& s = oracle;
  if (s.kind == "threshold") return make_threshold_oracle(s.b, s.c, s.divisor, s.offset);
  if (s.kind == "planted") return make_planted_oracle(s.b, s.c, s.seed, s.density);
  if (s.kind == "single_solution") return make_bitmap_oracle(plant_single_solution(s.b, s.c, s.seed), "single_solution");
  if (s.kind == "constant") return make_constant_oracle(s.b, s.c, s.value);
  if (s.kind == "reliability") return reliability_oracle(build_graph());
  return make_bitmap_oracle(MarkedBitmap::load(resolve(base_dir, s.path)), "bitmap");
}

ScenarioDistribution ExperimentConfig::build_distribution(int b) const {
  const auto& s = distribution;
  if (s.kind == "uniform") return ScenarioDistribution::uniform(b);
  if (s.kind == "iid") {
    if (s.q.size() == 1) return ScenarioDistribution::iid_bernoulli(b, s.q.front());
    if (static_cast<int>(s.q.size()) != b)
      throw ConfigError("distribution.q needs 1 or b = " + std::to_string(b) + " entries");
    return ScenarioDistribution::iid_bernoulli(b, s.q);
  }
  if (s.p.size() != (std::size_t{1} << b))
    throw ConfigError("distribution.p needs 2^b = " + std::to_string(std::size_t{1} << b) + " entries");
  return ScenarioDistribution::explicit_table(Eigen::Map<const Eigen::VectorXd>(s.p.data(), Eigen::Index(s.p.size())));
}

}  // namespace reqo
