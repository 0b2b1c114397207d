#include "reqo/oracle.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "reqo/distribution.hpp"
#include "reqo/errors.hpp"

namespace reqo {

Oracle::Oracle(int scenario_bits, int decision_bits, Predicate predicate, std::string name)
    : state_(std::make_shared<State>()) {
  if (scenario_bits < 1 || decision_bits < 1) throw InputError("oracle registers need at least one bit each");
  if (scenario_bits + decision_bits > kMaxOracleBits)
    throw CapacityError("oracle with b + c = " + std::to_string(scenario_bits + decision_bits) +
                        " exceeds limit " + std::to_string(kMaxOracleBits));
  if (!predicate) throw InputError("oracle predicate is empty");
  state_->b = scenario_bits;
  state_->c = decision_bits;
  state_->predicate = std::move(predicate);
  state_->name = std::move(name);
}

bool Oracle::evaluate(std::uint64_t xi, std::uint64_t phi) const {
  if (xi >= scenario_count() || phi >= decision_count())
    throw InputError("oracle query (" + std::to_string(xi) + ", " + std::to_string(phi) + ") out of range");
  charge(1);
  return state_->predicate(xi, phi);
}

const std::vector<std::uint8_t>& Oracle::marked_table() const {
  std::call_once(state_->table_once, [s = state_.get()] {
    const std::uint64_t nx = std::uint64_t{1} << s->b;
    const std::uint64_t ny = std::uint64_t{1} << s->c;
    s->table.resize(nx * ny);
    for (std::uint64_t xi = 0; xi < nx; ++xi)
      for (std::uint64_t phi = 0; phi < ny; ++phi) s->table[(xi << s->c) | phi] = s->predicate(xi, phi) ? 1 : 0;
  });
  return state_->table;
}

std::vector<std::uint64_t> completing_set(const Oracle& oracle, std::uint64_t xi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t phi = 0; phi < oracle.decision_count(); ++phi)
    if (oracle.evaluate(xi, phi)) out.push_back(phi);
  return out;
}

double ScenarioAnalysis::lambda_of_count(std::uint64_t k) const {
  return std::ldexp(static_cast<double>(k), -decision_bits);
}

double ScenarioAnalysis::lambda(std::uint64_t xi) const { return lambda_of_count(completing_counts.at(xi)); }

std::uint64_t ScenarioAnalysis::min_satisfiable_count() const {
  for (const auto& [k, mass] : lambda_histogram)
    if (k > 0 && mass > 0.0) return k;
  return 0;
}

ScenarioAnalysis analyze(const Oracle& oracle, const ScenarioDistribution& dist) {
  if (dist.scenario_bits() != oracle.scenario_bits())
    throw InputError("distribution and oracle disagree on the scenario bit count");

  ScenarioAnalysis out;
  out.decision_bits = oracle.decision_bits();
  out.completing_counts.resize(oracle.scenario_count());

  double weighted_inverse = 0.0;
  for (std::uint64_t xi = 0; xi < oracle.scenario_count(); ++xi) {
    const auto k = static_cast<std::uint64_t>(completing_set(oracle, xi).size());
    out.completing_counts[xi] = k;
    const double p = dist[xi];
    out.lambda_histogram[k] += p;
    if (k > 0) {
      out.mu += p;
      weighted_inverse += p / out.lambda_of_count(k);
    }
  }
  out.inv_lambda_expectation = out.mu > 0.0 ? weighted_inverse / out.mu : 0.0;
  return out;
}

double epsilon_t(const ScenarioAnalysis& analysis, double lambda_t) {
  const double floor = std::ldexp(1.0, -analysis.decision_bits);
  if (!(lambda_t >= floor && lambda_t <= 1.0))
    throw InputError("lambda_t must lie in [2^-c, 1], got " + std::to_string(lambda_t));
  // k < lambda_t * 2^c is exact: the product only shifts the exponent.
  const double threshold = std::ldexp(lambda_t, analysis.decision_bits);
  double eps = 0.0;
  for (const auto& [k, mass] : analysis.lambda_histogram)
    if (k > 0 && static_cast<double>(k) < threshold) eps += mass;
  return eps;
}

double largest_lambda_t(const ScenarioAnalysis& analysis, double max_epsilon_t) {
  double best = std::ldexp(1.0, -analysis.decision_bits);
  const std::uint64_t levels = std::uint64_t{1} << analysis.decision_bits;
  for (std::uint64_t k = 1; k <= levels; ++k) {
    const double lam = analysis.lambda_of_count(k);
    if (epsilon_t(analysis, lam) <= max_epsilon_t) best = lam;
    else break;
  }
  return best;
}

Oracle make_threshold_oracle(int b, int c, double divisor, double offset) {
  if (divisor == 0.0) throw InputError("threshold divisor must be non-zero");
  return Oracle(
      b, c,
      [divisor, offset](std::uint64_t xi, std::uint64_t phi) {
        return static_cast<double>(xi) / divisor - offset > static_cast<double>(phi);
      },
      "threshold");
}

Oracle make_constant_oracle(int b, int c, bool value) {
  return Oracle(b, c, [value](std::uint64_t, std::uint64_t) { return value; }, value ? "constant-true" : "constant-false");
}

std::string MarkedBitmap::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << b); ++xi) {
    nlohmann::json row = nlohmann::json::array();
    for (std::uint64_t phi = 0; phi < (std::uint64_t{1} << c); ++phi)
      if (at(xi, phi)) row.push_back(phi);
    rows.push_back(std::move(row));
  }
  nlohmann::json doc = {{"format", "reqo-marked-bitmap"}, {"version", 1}, {"b", b}, {"c", c}, {"marked", rows}};
  return doc.dump();
}

MarkedBitmap MarkedBitmap::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("marked bitmap: ") + e.what());
  }
  if (doc.value("format", "") != "reqo-marked-bitmap") throw ConfigError("marked bitmap: wrong format tag");
  MarkedBitmap out;
  try {
    out.b = doc.at("b").get<int>();
    out.c = doc.at("c").get<int>();
    if (out.b < 1 || out.c < 1 || out.b + out.c > kMaxOracleBits) throw ConfigError("marked bitmap: bad register sizes");
    const auto& rows = doc.at("marked");
    const std::uint64_t nx = std::uint64_t{1} << out.b;
    if (rows.size() != nx) throw ConfigError("marked bitmap: expected one row per scenario");
    out.marked.assign(nx << out.c, 0);
    for (std::uint64_t xi = 0; xi < nx; ++xi) {
      for (const auto& v : rows[xi]) {
        const auto phi = v.get<std::uint64_t>();
        if (phi >= (std::uint64_t{1} << out.c)) throw ConfigError("marked bitmap: decision index out of range");
        out.marked[(xi << out.c) | phi] = 1;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("marked bitmap: ") + e.what());
  }
  return out;
}

void MarkedBitmap::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << to_json() << '\n';
}

MarkedBitmap MarkedBitmap::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

MarkedBitmap plant_bitmap(int b, int c, std::uint64_t seed, double density) {
  if (!(density >= 0.0 && density <= 1.0)) throw InputError("planted density outside [0, 1]");
  if (b < 1 || c < 1 || b + c > kMaxOracleBits) throw CapacityError("planted oracle register sizes out of range");
  MarkedBitmap out{b, c, std::vector<std::uint8_t>(std::size_t{1} << (b + c), 0)};
  Rng rng(seed);
  for (auto& bit : out.marked) bit = uniform01(rng) < density ? 1 : 0;
  return out;
}

MarkedBitmap plant_single_solution(int b, int c, std::uint64_t seed) {
  if (b < 1 || c < 1 || b + c > kMaxOracleBits) throw CapacityError("planted oracle register sizes out of range");
  MarkedBitmap out{b, c, std::vector<std::uint8_t>(std::size_t{1} << (b + c), 0)};
  Rng rng(seed);
  const std::uint64_t ny = std::uint64_t{1} << c;
  for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << b); ++xi) out.marked[(xi << c) | (rng() % ny)] = 1;
  return out;
}

Oracle make_bitmap_oracle(MarkedBitmap bitmap, std::string name) {
  const int b = bitmap.b;
  const int c = bitmap.c;
  if (bitmap.marked.size() != (std::size_t{1} << (b + c))) throw InputError("bitmap size does not match b + c");
  auto shared = std::make_shared<const MarkedBitmap>(std::move(bitmap));
  return Oracle(b, c, [shared](std::uint64_t xi, std::uint64_t phi) { return shared->at(xi, phi); }, std::move(name));
}

Oracle make_planted_oracle(int b, int c, std::uint64_t seed, double density) {
  return make_bitmap_oracle(plant_bitmap(b, c, seed, density));
}

}  // namespace reqo
