#include "reqo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "reqo/classical.hpp"
#include "reqo/errors.hpp"
#include "reqo/estimator.hpp"
#include "reqo/graph.hpp"
#include "reqo/parallel.hpp"
#include "reqo/statevector.hpp"

namespace reqo {
namespace {

using nlohmann::json;

json meta(const ExperimentConfig& cfg, const std::string& command) {
  return json{{"software", kSoftwareVersion}, {"config_hash", cfg.hash()}, {"seed", cfg.seed}, {"command", command}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// First CSV line: provenance as `# key=value` pairs.
std::string csv_preamble(const ExperimentConfig& cfg, const std::string& command,
                         const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  std::string line = "# software=" + std::string(kSoftwareVersion) + " config_hash=" + cfg.hash() +
                     " seed=" + std::to_string(cfg.seed) + " command=" + command;
  for (const auto& [k, v] : extra) line += " " + k + "=" + v;
  return line + "\n";
}

struct CsvWriter {
  std::ostringstream out;

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << "\r\n";
  }
};

std::string num(double v) { return csv_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

/// delta and m, either from the config or from the epsilon-driven rule.
std::pair<double, int> quantum_settings(const AlgorithmSpec& spec) {
  if (spec.epsilon) {
    const QaeParameters q = qae_parameters(*spec.epsilon);
    return {q.delta, q.m};
  }
  return {spec.delta, spec.m};
}

QuantumParams quantum_params(const AlgorithmSpec& spec) {
  QuantumParams p;
  std::tie(p.delta, p.m) = quantum_settings(spec);
  p.lambda_t = spec.lambda_t;
  p.max_epsilon_t = spec.max_epsilon_t;
  p.log_base = spec.log_base;
  return p;
}

json analysis_json(const ScenarioAnalysis& a) {
  json hist = json::array();
  for (const auto& [k, mass] : a.lambda_histogram)
    hist.push_back({{"k", k}, {"lambda", a.lambda_of_count(k)}, {"mass", mass}});
  return json{{"mu", a.mu},
              {"inv_lambda_expectation", a.inv_lambda_expectation},
              {"decision_bits", a.decision_bits},
              {"lambda_histogram", hist}};
}

/// Per-sample classical model (mu E[1/lambda] + (1 - mu) 2^c).
double classical_per_sample(const ScenarioAnalysis& a, int c) { return expected_query_model(a, c, 1); }

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double resolve_lambda_t(const AlgorithmSpec& spec, const ScenarioAnalysis& analysis) {
  if (spec.lambda_t) return *spec.lambda_t;
  if (spec.max_epsilon_t) return largest_lambda_t(analysis, *spec.max_epsilon_t);
  return std::ldexp(1.0, -analysis.decision_bits);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs at least two points");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(x.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    A(Eigen::Index(i), 0) = std::log(x[i]);
    A(Eigen::Index(i), 1) = 1.0;
    rhs[Eigen::Index(i)] = std::log(y[i]);
  }
  return A.colPivHouseholderQr().solve(rhs)[0];
}

// ---------------------------------------------------------------------------

std::vector<OutputFile> cmd_dynamics(const ExperimentConfig& cfg, const RunOptions& opts) {
  const Oracle oracle = cfg.build_oracle();
  const ScenarioDistribution dist = cfg.build_distribution(oracle.scenario_bits());
  const ScenarioAnalysis analysis = analyze(oracle, dist);
  const double delta = quantum_settings(cfg.algorithm).first;
  const double lambda_t = resolve_lambda_t(cfg.algorithm, analysis);
  const double eps_t = epsilon_t(analysis, lambda_t);
  const int depth_t = min_depth(lambda_t, delta, cfg.algorithm.log_base);
  const double window_lo = (analysis.mu - eps_t) * (1.0 - delta * delta);
  const double window_hi = analysis.mu;
  const int c = oracle.decision_bits();
  const std::uint64_t scenarios = oracle.scenario_count();

  struct Point {
    std::vector<double> p_analytic, p_statevector;
    double a_analytic = 0.0;
    double a_statevector = 0.0;
    double max_slice_drift = 0.0;
  };
  const int l_count = cfg.algorithm.l_max - cfg.algorithm.l_min + 1;
  std::vector<Point> points(static_cast<std::size_t>(l_count));
  parallel_for(points.size(), opts.threads, [&](std::size_t i) {
    const int l = cfg.algorithm.l_min + static_cast<int>(i);
    const AngleSchedule schedule = angle_schedule(l, delta);
    StateVector state = prepare_initial(dist, c);
    run_search(state, oracle, schedule);
    check_norm(state, kUnitaryTolerance * (l + 1), "dynamics");
    Point& pt = points[i];
    pt.p_analytic.resize(scenarios);
    pt.p_statevector.resize(scenarios);
    for (std::uint64_t xi = 0; xi < scenarios; ++xi) {
      pt.p_analytic[xi] = success_probability(schedule.depth(), delta, analysis.lambda(xi));
      const double marked = scenario_marked_probability(state, oracle, xi);
      pt.a_analytic += dist[xi] * pt.p_analytic[xi];
      pt.a_statevector += marked;
      pt.p_statevector[xi] = dist[xi] > 0.0 ? marked / dist[xi] : std::nan("");
      pt.max_slice_drift = std::max(pt.max_slice_drift, std::abs(scenario_probability(state, xi) - dist[xi]));
    }
  });

  CsvWriter csv;
  csv.out << csv_preamble(cfg, "dynamics",
                          {{"delta", num(delta)},
                           {"lambda_t", num(lambda_t)},
                           {"L_t", num(depth_t)},
                           {"mu", num(analysis.mu)},
                           {"epsilon_t", num(eps_t)}});
  csv.row({"l", "L", "xi", "lambda_xi", "P_analytic", "P_statevector", "a", "window_lo", "window_hi", "L_t_marker"});
  json trace = json::array();
  double max_gap = 0.0;
  for (int i = 0; i < l_count; ++i) {
    const int l = cfg.algorithm.l_min + i;
    const int depth = 2 * l + 1;
    const Point& pt = points[static_cast<std::size_t>(i)];
    const std::string marker = depth == depth_t ? "1" : "0";
    for (std::uint64_t xi = 0; xi < scenarios; ++xi) {
      if (!std::isnan(pt.p_statevector[xi]))
        max_gap = std::max(max_gap, std::abs(pt.p_statevector[xi] - pt.p_analytic[xi]));
      csv.row({num(l), num(depth), num(xi), num(analysis.lambda(xi)), num(pt.p_analytic[xi]),
               num(pt.p_statevector[xi]), num(pt.a_analytic), num(window_lo), num(window_hi), marker});
    }
    csv.row({num(l), num(depth), "all", "", num(pt.a_analytic), num(pt.a_statevector), num(pt.a_analytic),
             num(window_lo), num(window_hi), marker});
    trace.push_back({{"l", l},
                     {"L", depth},
                     {"a_analytic", pt.a_analytic},
                     {"a_statevector", pt.a_statevector},
                     {"in_window", pt.a_analytic >= window_lo - 1e-12 && pt.a_analytic <= window_hi + 1e-12},
                     {"max_slice_drift", pt.max_slice_drift}});
  }

  json summary{{"meta", meta(cfg, "dynamics")},
               {"config", cfg.to_json()},
               {"analysis", analysis_json(analysis)},
               {"delta", delta},
               {"floor", 1.0 - delta * delta},
               {"lambda_t", lambda_t},
               {"epsilon_t", eps_t},
               {"L_t", depth_t},
               {"window", {window_lo, window_hi}},
               {"max_statevector_gap", max_gap},
               {"a_trace", trace}};
  return {{"dynamics.csv", csv.out.str()}, {"dynamics.json", dump(summary)}};
}

std::vector<OutputFile> cmd_qae(const ExperimentConfig& cfg, const RunOptions&) {
  const Oracle oracle = cfg.build_oracle();
  const ScenarioDistribution dist = cfg.build_distribution(oracle.scenario_bits());
  const QuantumRunReport report = estimate(oracle, dist, quantum_params(cfg.algorithm));
  json out{{"meta", meta(cfg, "qae")},
           {"config", cfg.to_json()},
           {"analysis", analysis_json(analyze(oracle, dist))},
           {"report", report.to_json()}};
  return {{"qae.json", dump(out)}};
}

std::vector<OutputFile> cmd_classical(const ExperimentConfig& cfg, const RunOptions& opts) {
  const Oracle oracle = cfg.build_oracle();
  const ScenarioDistribution dist = cfg.build_distribution(oracle.scenario_bits());
  const ScenarioAnalysis analysis = analyze(oracle, dist);
  ClassicalParams params;
  params.samples = cfg.classical.samples;
  params.order = cfg.classical.order;
  params.epsilon = cfg.classical.epsilon;
  params.seed = cfg.seed;

  std::vector<ClassicalRunReport> reports;
  if (cfg.classical.trials == 1) reports.push_back(estimate_mu(oracle, dist, analysis, params));
  else reports = run_trials(oracle, dist, analysis, params, cfg.classical.trials, opts.threads);

  CsvWriter csv;
  csv.out << csv_preamble(cfg, "classical",
                          {{"mu", num(analysis.mu)}, {"N", num(params.samples)}, {"search_order", to_string(params.order)}});
  csv.row({"trial", "seed", "hits", "mu_tilde", "queries_actual"});
  double sum_mu = 0.0, sum_mu2 = 0.0, sum_q = 0.0;
  std::uint64_t failures = 0;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    csv.row({num(std::uint64_t(t)), num(r.seed), num(r.hits), num(r.mu_tilde), num(r.queries_actual)});
    sum_mu += r.mu_tilde;
    sum_mu2 += r.mu_tilde * r.mu_tilde;
    sum_q += static_cast<double>(r.queries_actual);
    if (std::abs(r.mu_tilde - analysis.mu) >= params.epsilon) ++failures;
  }
  const double n = static_cast<double>(reports.size());
  const double mean_mu = sum_mu / n;
  const double mean_q = sum_q / n;
  const double model = expected_query_model(analysis, oracle.decision_bits(), params.samples);
  json summary{{"trials", reports.size()},
               {"mean_mu_tilde", mean_mu},
               {"std_mu_tilde", std::sqrt(std::max(0.0, sum_mu2 / n - mean_mu * mean_mu))},
               {"failure_rate", static_cast<double>(failures) / n},
               {"chebyshev_bound", chebyshev_bound(params.samples, params.epsilon, params.sigma2)},
               {"mean_queries", mean_q},
               {"queries_model", model},
               {"model_relative_gap", (mean_q - model) / model},
               {"queries_expected_exact",
                expected_queries_exact(oracle, dist, analysis, params.order, params.samples)}};
  json out{{"meta", meta(cfg, "classical")},
           {"config", cfg.to_json()},
           {"analysis", analysis_json(analysis)},
           {"summary", summary}};
  if (reports.size() == 1) out["report"] = reports.front().to_json();
  return {{"classical.json", dump(out)}, {"classical.csv", csv.out.str()}};
}

ScalingStudy scaling_study(const std::vector<int>& c_values, int b, double epsilon, std::uint64_t seed,
                           int measure_max_c, int threads) {
  ScalingStudy study;
  study.rows.resize(c_values.size());
  const QaeParameters q = qae_parameters(epsilon);
  parallel_for(c_values.size(), threads, [&](std::size_t i) {
    ScalingRow& row = study.rows[i];
    row.c = c_values[i];
    row.lambda_t = std::ldexp(1.0, -row.c);
    row.depth = min_depth(row.lambda_t, q.delta);
    row.M = q.M;
    row.quantum_model = static_cast<double>(oracle_call_model(row.depth, q.M));
    // One completing string per scenario: mu = 1 and E[1/lambda] = 2^c.
    row.classical_model = std::ldexp(1.0, row.c) / (epsilon * epsilon);
    if (row.c > measure_max_c) return;

    const Oracle oracle =
        make_bitmap_oracle(plant_single_solution(b, row.c, trial_seed(seed, std::uint64_t(row.c))), "single_solution");
    const ScenarioDistribution dist = ScenarioDistribution::uniform(b);
    const ScenarioAnalysis analysis = analyze(oracle, dist);
    if (std::abs(classical_per_sample(analysis, row.c) * 1.0 - std::ldexp(1.0, row.c)) > 1e-9)
      throw ConsistencyError("single-solution oracle does not have lambda = 2^-c");
    QuantumParams params;
    params.delta = q.delta;
    params.m = q.m;
    params.lambda_t = row.lambda_t;
    row.quantum_measured = estimate(oracle, dist, params).oracle_calls_actual;
    ClassicalParams cp;
    cp.samples = static_cast<std::uint64_t>(std::ceil(1.0 / (epsilon * epsilon) - 1e-9));
    cp.epsilon = epsilon;
    cp.seed = trial_seed(seed, 1000 + std::uint64_t(row.c));
    row.classical_samples = cp.samples;
    row.classical_measured = estimate_mu(oracle, dist, analysis, cp).queries_actual;
  });
  std::vector<double> x, yq, yc;
  for (const auto& r : study.rows) {
    x.push_back(std::ldexp(1.0, r.c));
    yq.push_back(r.quantum_model);
    yc.push_back(r.classical_model);
  }
  if (x.size() >= 2) {
    study.quantum_slope = loglog_slope(x, yq);
    study.classical_slope = loglog_slope(x, yc);
  }
  return study;
}

std::vector<OutputFile> cmd_compare(const ExperimentConfig& cfg, const RunOptions& opts) {
  const Oracle oracle = cfg.build_oracle();
  const ScenarioDistribution dist = cfg.build_distribution(oracle.scenario_bits());
  const ScenarioAnalysis analysis = analyze(oracle, dist);
  const int b = oracle.scenario_bits();
  const int c = oracle.decision_bits();
  const double per_sample = classical_per_sample(analysis, c);
  const double lambda_t = resolve_lambda_t(cfg.algorithm, analysis);
  const double eps_t = epsilon_t(analysis, lambda_t);

  struct EpsRow {
    double epsilon = 0.0;
    QaeParameters q;
    int depth = 0;
    double classical_model = 0.0;
    double quantum_model = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t classical_measured = 0;
    double mu_tilde = 0.0;
    bool quantum_simulated = false;
    std::uint64_t quantum_measured = 0;
    double a_tilde = std::nan("");
    std::uint64_t matched_samples = 0;
    std::uint64_t matched_queries = 0;
    double matched_mu_tilde = std::nan("");
  };
  std::vector<EpsRow> eps_rows(cfg.compare.epsilons.size());
  parallel_for(eps_rows.size(), opts.threads, [&](std::size_t i) {
    EpsRow& r = eps_rows[i];
    r.epsilon = cfg.compare.epsilons[i];
    r.q = qae_parameters(r.epsilon);
    r.depth = min_depth(lambda_t, r.q.delta, cfg.algorithm.log_base);
    r.quantum_model = static_cast<double>(oracle_call_model(r.depth, r.q.M));
    r.classical_model = per_sample / (r.epsilon * r.epsilon);

    ClassicalParams cp;
    cp.samples = static_cast<std::uint64_t>(std::ceil(1.0 / (r.epsilon * r.epsilon) - 1e-9));
    cp.epsilon = r.epsilon;
    cp.order = cfg.classical.order;
    cp.seed = trial_seed(cfg.seed, 2 * i);
    const ClassicalRunReport cr = estimate_mu(oracle, dist, analysis, cp);
    r.samples = cp.samples;
    r.classical_measured = cr.queries_actual;
    r.mu_tilde = cr.mu_tilde;

    double budget = r.quantum_model;
    if (b + c + 1 + r.q.m <= cfg.compare.measure_max_qubits) {
      QuantumParams qp;
      qp.delta = r.q.delta;
      qp.m = r.q.m;
      qp.lambda_t = lambda_t;
      qp.log_base = cfg.algorithm.log_base;
      const QuantumRunReport qr = estimate(oracle, dist, qp);
      r.quantum_simulated = true;
      r.quantum_measured = qr.oracle_calls_actual;
      r.a_tilde = qr.a_tilde_mode;
      budget = static_cast<double>(qr.oracle_calls_actual);
    }
    // Classical run granted the quantum query budget.
    cp.samples = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(budget / per_sample));
    cp.seed = trial_seed(cfg.seed, 2 * i + 1);
    const ClassicalRunReport matched = estimate_mu(oracle, dist, analysis, cp);
    r.matched_samples = cp.samples;
    r.matched_queries = matched.queries_actual;
    r.matched_mu_tilde = matched.mu_tilde;
  });

  const ScalingStudy scaling = scaling_study(cfg.compare.c_values, cfg.compare.scaling_b, cfg.compare.scaling_epsilon,
                                             cfg.seed, cfg.compare.measure_max_c, opts.threads);

  CsvWriter csv;
  csv.out << csv_preamble(cfg, "compare",
                          {{"mu", num(analysis.mu)}, {"lambda_t", num(lambda_t)}, {"epsilon_t", num(eps_t)}});
  csv.row({"section", "epsilon", "c", "lambda_t", "L_t", "M", "N", "classical_model", "quantum_model",
           "classical_measured", "quantum_measured", "advantage_ratio", "mu_tilde", "a_tilde", "matched_N",
           "matched_mu_tilde", "abs_err_classical", "abs_err_quantum", "abs_err_matched"});
  json eps_json = json::array();
  for (const auto& r : eps_rows) {
    const auto err = [&](double est) { return std::isnan(est) ? est : std::abs(est - analysis.mu); };
    csv.row({"epsilon", num(r.epsilon), num(c), num(lambda_t), num(r.depth), num(r.q.M), num(r.samples),
             num(r.classical_model), num(r.quantum_model), num(r.classical_measured),
             r.quantum_simulated ? num(r.quantum_measured) : "", num(r.classical_model / r.quantum_model),
             num(r.mu_tilde), num(r.a_tilde), num(r.matched_samples), num(r.matched_mu_tilde), num(err(r.mu_tilde)),
             num(err(r.a_tilde)), num(err(r.matched_mu_tilde))});
    json row{{"epsilon", r.epsilon},
             {"delta", r.q.delta},
             {"m", r.q.m},
             {"M", r.q.M},
             {"L_t", r.depth},
             {"N", r.samples},
             {"classical_model", r.classical_model},
             {"quantum_model", r.quantum_model},
             {"advantage_ratio", r.classical_model / r.quantum_model},
             {"classical_measured", r.classical_measured},
             {"mu_tilde", r.mu_tilde},
             {"matched_N", r.matched_samples},
             {"matched_queries", r.matched_queries},
             {"matched_mu_tilde", r.matched_mu_tilde}};
    if (r.quantum_simulated) {
      row["quantum_measured"] = r.quantum_measured;
      row["a_tilde"] = r.a_tilde;
    } else {
      row["quantum_measured"] = nullptr;
      row["a_tilde"] = nullptr;
    }
    eps_json.push_back(row);
  }
  json scaling_json = json::array();
  for (const auto& r : scaling.rows) {
    const bool measured = r.quantum_measured > 0;
    csv.row({"scaling", num(cfg.compare.scaling_epsilon), num(r.c), num(r.lambda_t), num(r.depth), num(r.M),
             measured ? num(r.classical_samples) : "", num(r.classical_model), num(r.quantum_model),
             measured ? num(r.classical_measured) : "", measured ? num(r.quantum_measured) : "",
             num(r.classical_model / r.quantum_model), "", "", "", "", "", "", ""});
    json row{{"c", r.c},
             {"lambda_t", r.lambda_t},
             {"L_t", r.depth},
             {"M", r.M},
             {"classical_model", r.classical_model},
             {"quantum_model", r.quantum_model}};
    row["quantum_measured"] = measured ? json(r.quantum_measured) : json(nullptr);
    row["classical_measured"] = measured ? json(r.classical_measured) : json(nullptr);
    scaling_json.push_back(row);
  }
  csv.row({"fit_slope", num(cfg.compare.scaling_epsilon), "", "", "", "", "", num(scaling.classical_slope),
           num(scaling.quantum_slope), "", "", "", "", "", "", "", "", "", ""});

  json out{{"meta", meta(cfg, "compare")},
           {"config", cfg.to_json()},
           {"analysis", analysis_json(analysis)},
           {"classical_per_sample_model", per_sample},
           {"lambda_t", lambda_t},
           {"epsilon_t", eps_t},
           {"epsilon_grid", eps_json},
           {"scaling", {{"b", cfg.compare.scaling_b},
                        {"epsilon", cfg.compare.scaling_epsilon},
                        {"rows", scaling_json},
                        {"quantum_slope", scaling.quantum_slope},
                        {"classical_slope", scaling.classical_slope}}}};
  return {{"compare.json", dump(out)}, {"compare.csv", csv.out.str()}};
}

std::vector<OutputFile> cmd_reliability(const ExperimentConfig& cfg, const RunOptions& opts) {
  Graph graph;
  if (!opts.graph_path.empty()) graph = Graph::load(opts.graph_path);
  else if (cfg.oracle.kind == "reliability") graph = cfg.build_graph();
  else throw ConfigError("reliability needs --graph or a reliability oracle in the config");
  if (graph.edge_count() > kMaxReliabilityCommandEdges)
    throw CapacityError("reliability command accepts at most " + std::to_string(kMaxReliabilityCommandEdges) +
                        " edges");

  const Oracle oracle = reliability_oracle(graph);
  const ScenarioDistribution dist = ScenarioDistribution::uniform(oracle.scenario_bits());
  const double exact = two_terminal_reliability(graph);
  const ScenarioAnalysis analysis = analyze(oracle, dist);

  const QuantumRunReport qr = estimate(oracle, dist, quantum_params(cfg.algorithm));
  ClassicalParams cp;
  cp.samples = cfg.classical.samples;
  cp.epsilon = cfg.classical.epsilon;
  cp.order = cfg.classical.order;
  cp.seed = cfg.seed;
  const ClassicalRunReport cr = estimate_mu(oracle, dist, analysis, cp);

  json edges = json::array();
  for (const auto& [u, v] : graph.edges) edges.push_back({u, v});
  json checks{{"mu_matches_enumeration", std::abs(analysis.mu - exact) < 1e-12},
              {"a_in_window", qr.a_exact >= qr.window_lo - 1e-9 && qr.a_exact <= qr.window_hi + 1e-9},
              {"qae_success_mass", qr.success_mass >= kQaeSuccessFloor},
              {"end_to_end_mass", qr.end_to_end_mass >= kQaeSuccessFloor},
              {"mode_within_end_to_end_epsilon", std::abs(qr.a_tilde_mode - exact) <= qr.epsilon_bound + 1e-12},
              {"classical_within_epsilon", std::abs(cr.mu_tilde - exact) < cp.epsilon}};
  json out{{"meta", meta(cfg, "reliability")},
           {"config", cfg.to_json()},
           {"graph", {{"vertices", graph.vertex_count}, {"terminals", {graph.source, graph.target}}, {"edges", edges}}},
           {"exact_reliability", exact},
           {"analysis", analysis_json(analysis)},
           {"quantum", qr.to_json()},
           {"classical", cr.to_json()},
           {"checks", checks}};
  return {{"reliability.json", dump(out)}};
}

std::vector<OutputFile> cmd_selftest(const ExperimentConfig& cfg, const RunOptions&, bool& passed) {
  json checks = json::array();
  passed = true;
  const auto record = [&](const std::string& name, bool ok, double value) {
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}});
    passed = passed && ok;
  };

  {  // fixed-point floor on the k/64 grid
    double worst = 1.0;
    for (double delta : {0.1, 0.3, 0.5})
      for (int k = 1; k <= 64; ++k) {
        const int depth = min_depth(k / 64.0, delta);
        for (int k2 = k; k2 <= 64; ++k2)
          worst = std::min(worst, success_probability(depth, delta, k2 / 64.0) - (1.0 - delta * delta));
      }
    record("fixed_point_floor", worst >= -1e-9, worst);
  }
  {  // statevector search against the closed form
    double gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Oracle oracle = make_planted_oracle(3, 3, seed, 0.3);
      const auto dist = ScenarioDistribution::uniform(3);
      const ScenarioAnalysis a = analyze(oracle, dist);
      for (int l = 0; l <= 6; ++l) {
        const AngleSchedule s = angle_schedule(l, 0.3);
        StateVector state = prepare_initial(dist, 3);
        run_search(state, oracle, s);
        for (std::uint64_t xi = 0; xi < 8; ++xi)
          gap = std::max(gap, std::abs(scenario_marked_probability(state, oracle, xi) / dist[xi] -
                                       success_probability(s.depth(), 0.3, a.lambda(xi))));
      }
    }
    record("search_matches_closed_form", gap <= 1e-6, gap);
  }
  {
    const Oracle oracle = make_threshold_oracle(6, 6, 8.0, 3.0);
    const ScenarioAnalysis a = analyze(oracle, ScenarioDistribution::uniform(6));
    record("threshold_mu_39_64", std::abs(a.mu - 39.0 / 64.0) < 1e-15, a.mu);
  }
  {
    Graph g;
    g.vertex_count = 3;
    g.edges = {{0, 1}, {0, 2}, {2, 1}};
    const Oracle oracle = reliability_oracle(g);
    const ScenarioAnalysis a = analyze(oracle, ScenarioDistribution::uniform(3));
    record("triangle_reliability_5_8", std::abs(a.mu - 0.625) < 1e-15, a.mu);
  }
  {  // QAE window mass on a small planted instance
    const Oracle oracle = make_planted_oracle(2, 2, 11, 0.4);
    const auto dist = ScenarioDistribution::uniform(2);
    const AngleSchedule s = angle_schedule(1, 0.3);
    const double a = good_state_probability(oracle, dist, s);
    const PhaseEstimation pe = phase_estimation(oracle, dist, s, 5);
    const double bound = qae_error_bound(a, pe.M);
    const double mass = outcome_mass(pe.probabilities, [&](double est) { return std::abs(est - a) <= bound + 1e-12; });
    record("qae_window_mass", mass >= kQaeSuccessFloor, mass);
  }
  {
    const QaeParameters q = qae_parameters(0.1);
    record("qae_parameters_eps_0.1", q.M == 128 && q.delta == 0.05, static_cast<double>(q.M));
  }
  {
    const Oracle f = make_constant_oracle(2, 3, false);
    const ScenarioAnalysis a = analyze(f, ScenarioDistribution::uniform(2));
    const double model = expected_query_model(a, 3, 10);
    record("classical_model_constant_false", model == 80.0, model);
  }

  json out{{"meta", meta(cfg, "selftest")}, {"passed", passed}, {"checks", checks}};
  return {{"selftest.json", dump(out)}};
}

std::vector<OutputFile> run_command(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts,
                                    bool& passed) {
  passed = true;
  if (command == "dynamics") return cmd_dynamics(cfg, opts);
  if (command == "qae") return cmd_qae(cfg, opts);
  if (command == "classical") return cmd_classical(cfg, opts);
  if (command == "compare") return cmd_compare(cfg, opts);
  if (command == "reliability") return cmd_reliability(cfg, opts);
  if (command == "selftest") return cmd_selftest(cfg, opts, passed);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace reqo
