#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace reqo {

class ScenarioDistribution;

/// Upper bound on b + c for any oracle; the marked table is 2^(b+c) bytes.
inline constexpr int kMaxOracleBits = 26;

/// Black-box boolean oracle f(xi, phi) over a b-bit scenario register and a
/// c-bit decision register.
///
/// Copies are handles to the same box: they share the predicate, the cached
/// marked table, and the query counter.  The counter is the complexity
/// ledger; `evaluate` adds one per call, and simulators that read the marked
/// table through the fast path must `charge` every logical oracle use.
class Oracle {
 public:
  using Predicate = std::function<bool(std::uint64_t xi, std::uint64_t phi)>;

  Oracle(int scenario_bits, int decision_bits, Predicate predicate, std::string name = "oracle");

  int scenario_bits() const { return state_->b; }
  int decision_bits() const { return state_->c; }
  std::uint64_t scenario_count() const { return std::uint64_t{1} << state_->b; }
  std::uint64_t decision_count() const { return std::uint64_t{1} << state_->c; }
  const std::string& name() const { return state_->name; }

  /// Counted query.  Throws InputError on out-of-range indices.
  bool evaluate(std::uint64_t xi, std::uint64_t phi) const;

  /// Bitmap fast path: entry (xi << c) | phi is f(xi, phi).  Built once,
  /// uncounted; callers account for queries with `charge`.
  const std::vector<std::uint8_t>& marked_table() const;

  void charge(std::uint64_t calls) const { state_->calls.fetch_add(calls, std::memory_order_relaxed); }
  std::uint64_t call_count() const { return state_->calls.load(std::memory_order_relaxed); }
  void reset_call_count() const { state_->calls.store(0, std::memory_order_relaxed); }

 private:
  struct State {
    int b = 0;
    int c = 0;
    Predicate predicate;
    std::string name;
    std::atomic<std::uint64_t> calls{0};
    std::once_flag table_once;
    std::vector<std::uint8_t> table;
  };
  std::shared_ptr<State> state_;
};

/// Phi*_xi by exhaustive enumeration of all 2^c decision strings (counted).
std::vector<std::uint64_t> completing_set(const Oracle& oracle, std::uint64_t xi);

/// Exact brute-force picture of an oracle under a scenario distribution.
struct ScenarioAnalysis {
  int decision_bits = 0;
  /// |Phi*_xi| for every xi; lambda_xi = count / 2^c.
  std::vector<std::uint64_t> completing_counts;
  double mu = 0.0;
  /// p(lambda) binned on the exact completing count k (lambda = k / 2^c),
  /// including k = 0.
  std::map<std::uint64_t, double> lambda_histogram;
  /// E[1/lambda | lambda > 0]; zero when mu == 0.
  double inv_lambda_expectation = 0.0;

  double lambda(std::uint64_t xi) const;
  double lambda_of_count(std::uint64_t k) const;
  std::uint64_t min_satisfiable_count() const;
};

/// Enumerates every (xi, phi) pair through `evaluate`.
ScenarioAnalysis analyze(const Oracle& oracle, const ScenarioDistribution& dist);

/// Probability mass of satisfiable scenarios with lambda strictly below lambda_t.
/// lambda_t must lie in [2^-c, 1].
double epsilon_t(const ScenarioAnalysis& analysis, double lambda_t);

/// Largest lambda level k / 2^c whose epsilon_t does not exceed `max_epsilon_t`.
double largest_lambda_t(const ScenarioAnalysis& analysis, double max_epsilon_t);

/// f = 1 iff xi / divisor - offset > phi, with real division.
Oracle make_threshold_oracle(int b, int c, double divisor, double offset);
Oracle make_constant_oracle(int b, int c, bool value);

/// Explicit marked-set bitmap: bit (xi << c) | phi.
struct MarkedBitmap {
  int b = 0;
  int c = 0;
  std::vector<std::uint8_t> marked;

  bool at(std::uint64_t xi, std::uint64_t phi) const { return marked[(xi << c) | phi] != 0; }
  std::string to_json() const;
  static MarkedBitmap from_json(const std::string& text);
  void save(const std::string& path) const;
  static MarkedBitmap load(const std::string& path);
};

/// Every pair marked independently with probability `density`.
MarkedBitmap plant_bitmap(int b, int c, std::uint64_t seed, double density);
/// Exactly one completing string per scenario, chosen uniformly.
MarkedBitmap plant_single_solution(int b, int c, std::uint64_t seed);
Oracle make_bitmap_oracle(MarkedBitmap bitmap, std::string name = "planted");
Oracle make_planted_oracle(int b, int c, std::uint64_t seed, double density);

}  // namespace reqo
