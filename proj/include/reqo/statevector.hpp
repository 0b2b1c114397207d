#pragma once

// Dense statevector simulation of the search and amplitude-estimation
// circuits.
//
// Register layout, most significant block first:
//
//     x (b bits) | y (c bits) | mark ancilla (0 or 1 bit) | sample (m bits)
//
// Each block is little-endian, so the basis index of (xi, phi, anc, s) is
// ((((xi << c) | phi) << a) | anc) << m | s with a = 1 when the ancilla exists.
// Sample qubit j (bit j of s) controls Q^(2^j).
//
// Every operator takes an optional `control` mask over the sample register:
// the operator acts only on basis states whose sample bits include the mask,
// which is how controlled-Q is realized without building matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "reqo/distribution.hpp"
#include "reqo/errors.hpp"
#include "reqo/oracle.hpp"
#include "reqo/schedule.hpp"

namespace reqo {

inline constexpr int kMaxStateQubits = 26;
inline constexpr double kUnitaryTolerance = 1e-9;

struct RegisterLayout {
  int b = 1;
  int c = 1;
  bool mark_ancilla = false;
  int m = 0;

  int ancilla_bits() const { return mark_ancilla ? 1 : 0; }
  int qubits() const { return b + c + ancilla_bits() + m; }
  std::uint64_t dimension() const { return std::uint64_t{1} << qubits(); }
  std::uint64_t system_dimension() const { return std::uint64_t{1} << (b + c + ancilla_bits()); }
  std::uint64_t sample_count() const { return std::uint64_t{1} << m; }

  int ancilla_offset() const { return m; }
  int decision_offset() const { return m + ancilla_bits(); }
  int scenario_offset() const { return m + ancilla_bits() + c; }

  std::uint64_t index(std::uint64_t xi, std::uint64_t phi, std::uint64_t anc = 0, std::uint64_t s = 0) const {
    return (((((xi << c) | phi) << ancilla_bits()) | anc) << m) | s;
  }

  void validate() const {
    if (b < 1 || c < 1 || m < 0) throw InputError("register sizes must be b >= 1, c >= 1, m >= 0");
    if (qubits() > kMaxStateQubits)
      throw CapacityError("state needs " + std::to_string(qubits()) + " qubits, limit is " +
                          std::to_string(kMaxStateQubits));
  }

  bool operator==(const RegisterLayout&) const = default;
};

struct TraceEntry {
  std::string tag;
  std::vector<double> params;
  std::uint64_t oracle_calls = 0;
  std::uint64_t control = 0;
};

/// Append-only record of applied operators.  The oracle-call ledger is kept
/// even when entry recording is off.
class OperatorTrace {
 public:
  bool recording = false;

  void append(std::string tag, std::vector<double> params, std::uint64_t calls, std::uint64_t control) {
    oracle_calls_ += calls;
    if (recording) entries_.push_back({std::move(tag), std::move(params), calls, control});
  }
  const std::vector<TraceEntry>& entries() const { return entries_; }
  std::uint64_t oracle_calls() const { return oracle_calls_; }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& e : entries_) {
      os << e.tag;
      for (double p : e.params) os << ' ' << p;
      if (e.control) os << " ctrl=" << e.control;
      if (e.oracle_calls) os << " calls=" << e.oracle_calls;
      os << '\n';
    }
    os << "total oracle calls: " << oracle_calls_ << '\n';
    return os.str();
  }

 private:
  std::vector<TraceEntry> entries_;
  std::uint64_t oracle_calls_ = 0;
};

template <typename Real>
class BasicStateVector {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// The computational basis state |0...0>.
  explicit BasicStateVector(RegisterLayout layout) : layout_(layout) {
    layout_.validate();
    amplitudes_ = Vector::Zero(static_cast<Eigen::Index>(layout_.dimension()));
    amplitudes_[0] = Scalar(1);
  }

  BasicStateVector(RegisterLayout layout, Vector amplitudes) : layout_(layout), amplitudes_(std::move(amplitudes)) {
    layout_.validate();
    if (static_cast<std::uint64_t>(amplitudes_.size()) != layout_.dimension())
      throw StateShapeError("amplitude count does not match the register layout");
  }

  const RegisterLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }
  Scalar operator[](std::uint64_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

  Real norm() const { return amplitudes_.norm(); }

  OperatorTrace& trace() { return trace_; }
  const OperatorTrace& trace() const { return trace_; }

 private:
  RegisterLayout layout_;
  Vector amplitudes_;
  OperatorTrace trace_;
};

using StateVector = BasicStateVector<double>;

namespace detail {

template <typename Real>
using StridedMap = Eigen::Map<typename BasicStateVector<Real>::Vector, 0, Eigen::InnerStride<>>;

/// Calls fn(slice) for every slice of the register at bit `offset` with
/// `width` bits, skipping slices whose sample bits miss `control`.
template <typename Real, typename Fn>
void for_each_slice(BasicStateVector<Real>& state, int offset, int width, std::uint64_t control, Fn&& fn) {
  const int n = state.layout().qubits();
  const std::uint64_t hi_count = std::uint64_t{1} << (n - offset - width);
  const std::uint64_t lo_count = std::uint64_t{1} << offset;
  const auto length = Eigen::Index{1} << width;
  auto* data = state.amplitudes().data();
  for (std::uint64_t hi = 0; hi < hi_count; ++hi) {
    for (std::uint64_t lo = 0; lo < lo_count; ++lo) {
      if ((lo & control) != control) continue;
      const std::uint64_t base = (hi << (offset + width)) | lo;
      StridedMap<Real> slice(data + base, length, Eigen::InnerStride<>(Eigen::Index{1} << offset));
      fn(slice);
    }
  }
}

/// In-place normalized Walsh-Hadamard transform, H^{(x) k}.
template <typename Slice>
void walsh_hadamard(Slice& v) {
  using Scalar = typename Slice::Scalar;
  const Eigen::Index n = v.size();
  for (Eigen::Index h = 1; h < n; h <<= 1) {
    for (Eigen::Index i = 0; i < n; i += h << 1) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const Scalar a = v(j);
        const Scalar b = v(j + h);
        v(j) = a + b;
        v(j + h) = a - b;
      }
    }
  }
  v *= typename Scalar::value_type(1) / std::sqrt(typename Scalar::value_type(n));
}

template <typename Real>
void require_controls_in_sample(const BasicStateVector<Real>& state, std::uint64_t control) {
  if (control >> state.layout().m) throw StateShapeError("control mask addresses qubits outside the sample register");
}

template <typename Real>
void require_oracle_fits(const BasicStateVector<Real>& state, const Oracle& oracle) {
  if (oracle.scenario_bits() != state.layout().b || oracle.decision_bits() != state.layout().c)
    throw StateShapeError("oracle registers do not match the state layout");
}

/// Multiplies every amplitude of the controlled sample slices by `factor`.
template <typename Real>
void scale_controlled(BasicStateVector<Real>& state, std::complex<Real> factor, std::uint64_t control) {
  if (control == 0) {
    state.amplitudes() *= factor;
    return;
  }
  const std::uint64_t mask = state.layout().sample_count() - 1;
  auto& a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if ((static_cast<std::uint64_t>(i) & mask & control) == control) a[i] *= factor;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State preparation V = (P (x) I)(I (x) H^c)

/// Applies V to the x and y registers.  P is realized as the Householder
/// reflection taking |0> to sum_xi sqrt(p(xi)) |xi>; it is real symmetric and
/// commutes with H^c on y, so V is an involution and V^dagger = V.
template <typename Real>
void apply_state_preparation(BasicStateVector<Real>& state, const ScenarioDistribution& dist,
                             std::uint64_t control = 0) {
  const auto& lay = state.layout();
  if (dist.scenario_bits() != lay.b) throw StateShapeError("distribution does not match the scenario register");
  detail::require_controls_in_sample(state, control);
  using Scalar = std::complex<Real>;

  Eigen::VectorXd w = -dist.amplitudes();
  w[0] += 1.0;
  const double wnorm2 = w.squaredNorm();
  if (wnorm2 > 1e-30) {
    const auto wc = w.cast<Real>().template cast<Scalar>().eval();
    const Real scale = Real(2) / static_cast<Real>(wnorm2);
    detail::for_each_slice(state, lay.scenario_offset(), lay.b, control, [&](auto& slice) {
      const Scalar overlap = wc.dot(slice);
      slice -= (scale * overlap) * wc;
    });
  }
  detail::for_each_slice(state, lay.decision_offset(), lay.c, control,
                         [](auto& slice) { detail::walsh_hadamard(slice); });
  state.trace().append("V", {}, 0, control);
}

/// V^dagger; identical to V for the Householder realization.
template <typename Real>
void apply_state_preparation_adjoint(BasicStateVector<Real>& state, const ScenarioDistribution& dist,
                                     std::uint64_t control = 0) {
  apply_state_preparation(state, dist, control);
}

/// V|0> on a layout with no sample register: sum_xi sqrt(p) |xi> (x) |+>^c.
inline StateVector prepare_initial(const ScenarioDistribution& dist, int c, bool mark_ancilla = false) {
  StateVector state(RegisterLayout{dist.scenario_bits(), c, mark_ancilla, 0});
  apply_state_preparation(state, dist);
  return state;
}

// ---------------------------------------------------------------------------
// Oracle operators

/// S_Phi(beta) = U_f Z_anc(beta) U_f: phase e^{-i beta} on every basis state
/// with anc XOR f(xi, phi) = 1.  With the ancilla in |0> this multiplies the
/// marked (xi, phi) amplitudes by e^{-i beta}.  Without an ancilla register
/// the phase is applied on f = 1 directly.  Charges two oracle calls.
template <typename Real>
void apply_target_reflection(BasicStateVector<Real>& state, const Oracle& oracle, double beta,
                             std::uint64_t control = 0) {
  detail::require_oracle_fits(state, oracle);
  detail::require_controls_in_sample(state, control);
  const auto& lay = state.layout();
  const auto& table = oracle.marked_table();
  const std::complex<Real> phase = std::polar(Real(1), static_cast<Real>(-beta));
  const std::uint64_t samples = lay.sample_count();
  const std::uint64_t anc_states = std::uint64_t{1} << lay.ancilla_bits();
  auto& a = state.amplitudes();
  for (std::uint64_t xy = 0; xy < table.size(); ++xy) {
    for (std::uint64_t anc = 0; anc < anc_states; ++anc) {
      if ((table[xy] ^ anc) == 0) continue;
      const std::uint64_t base = ((xy << lay.ancilla_bits()) | anc) << lay.m;
      for (std::uint64_t s = 0; s < samples; ++s)
        if ((s & control) == control) a[static_cast<Eigen::Index>(base | s)] *= phase;
    }
  }
  oracle.charge(2);
  state.trace().append("S_Phi", {beta}, 2, control);
}

/// U_f: ancilla ^= f(xi, phi).  Charges one oracle call.
template <typename Real>
void apply_oracle_mark(BasicStateVector<Real>& state, const Oracle& oracle, std::uint64_t control = 0) {
  detail::require_oracle_fits(state, oracle);
  detail::require_controls_in_sample(state, control);
  const auto& lay = state.layout();
  if (!lay.mark_ancilla) throw StateShapeError("U_f needs the mark ancilla register");
  const auto& table = oracle.marked_table();
  const std::uint64_t samples = lay.sample_count();
  auto& a = state.amplitudes();
  for (std::uint64_t xy = 0; xy < table.size(); ++xy) {
    if (!table[xy]) continue;
    const std::uint64_t zero = (xy << 1) << lay.m;
    const std::uint64_t one = ((xy << 1) | 1) << lay.m;
    for (std::uint64_t s = 0; s < samples; ++s)
      if ((s & control) == control)
        std::swap(a[static_cast<Eigen::Index>(zero | s)], a[static_cast<Eigen::Index>(one | s)]);
  }
  oracle.charge(1);
  state.trace().append("U_f", {}, 1, control);
}

// ---------------------------------------------------------------------------
// Mixer and search

/// S_+(alpha) = I - (1 - e^{i alpha}) I_x (x) |+><+|^c, acting on y only.
/// Per (xi, anc, s) slice: amp <- amp - (1 - e^{i alpha}) * mean(slice).
template <typename Real>
void apply_mixer_reflection(BasicStateVector<Real>& state, double alpha, std::uint64_t control = 0) {
  detail::require_controls_in_sample(state, control);
  const auto& lay = state.layout();
  const std::complex<Real> coeff = std::complex<Real>(1) - std::polar(Real(1), static_cast<Real>(alpha));
  detail::for_each_slice(state, lay.decision_offset(), lay.c, control, [&](auto& slice) {
    const std::complex<Real> mean = slice.mean();
    slice.array() -= coeff * mean;
  });
  state.trace().append("S_+", {alpha}, 0, control);
}

/// G(alpha, beta) = -S_+(alpha) S_Phi(beta).
template <typename Real>
void apply_grover_iterate(BasicStateVector<Real>& state, const Oracle& oracle, double alpha, double beta,
                          std::uint64_t control = 0) {
  apply_target_reflection(state, oracle, beta, control);
  apply_mixer_reflection(state, alpha, control);
  detail::scale_controlled(state, std::complex<Real>(-1), control);
}

/// S_L = G(alpha_l, beta_l) ... G(alpha_1, beta_1).
template <typename Real>
void run_search(BasicStateVector<Real>& state, const Oracle& oracle, const AngleSchedule& schedule,
                std::uint64_t control = 0) {
  for (int j = 0; j < schedule.l; ++j)
    apply_grover_iterate(state, oracle, schedule.alphas[j], schedule.betas[j], control);
}

/// S_L^dagger: iterates in reverse, each G^dagger = -S_Phi(-beta) S_+(-alpha).
template <typename Real>
void run_search_adjoint(BasicStateVector<Real>& state, const Oracle& oracle, const AngleSchedule& schedule,
                        std::uint64_t control = 0) {
  for (int j = schedule.l - 1; j >= 0; --j) {
    apply_mixer_reflection(state, -schedule.alphas[j], control);
    apply_target_reflection(state, oracle, -schedule.betas[j], control);
    detail::scale_controlled(state, std::complex<Real>(-1), control);
  }
}

// ---------------------------------------------------------------------------
// Amplitude estimation

/// A = U_f S_L V.
template <typename Real>
void apply_marking_operator(BasicStateVector<Real>& state, const Oracle& oracle, const ScenarioDistribution& dist,
                            const AngleSchedule& schedule, std::uint64_t control = 0) {
  apply_state_preparation(state, dist, control);
  run_search(state, oracle, schedule, control);
  apply_oracle_mark(state, oracle, control);
}

/// A^dagger = V^dagger S_L^dagger U_f.
template <typename Real>
void apply_marking_operator_adjoint(BasicStateVector<Real>& state, const Oracle& oracle,
                                    const ScenarioDistribution& dist, const AngleSchedule& schedule,
                                    std::uint64_t control = 0) {
  apply_oracle_mark(state, oracle, control);
  run_search_adjoint(state, oracle, schedule, control);
  apply_state_preparation_adjoint(state, dist, control);
}

/// I - 2|0><0| on the x, y and ancilla registers.
template <typename Real>
void apply_zero_reflection(BasicStateVector<Real>& state, std::uint64_t control = 0) {
  detail::require_controls_in_sample(state, control);
  for (std::uint64_t s = 0; s < state.layout().sample_count(); ++s)
    if ((s & control) == control) state.amplitudes()[static_cast<Eigen::Index>(s)] *= Real(-1);
  state.trace().append("S_0", {}, 0, control);
}

/// I (x) -Z on the mark ancilla: negates the anc = 0 half.
template <typename Real>
void apply_minus_z(BasicStateVector<Real>& state, std::uint64_t control = 0) {
  detail::require_controls_in_sample(state, control);
  const auto& lay = state.layout();
  if (!lay.mark_ancilla) throw StateShapeError("-Z needs the mark ancilla register");
  detail::for_each_slice(state, lay.ancilla_offset(), 1, control, [](auto& slice) { slice(0) = -slice(0); });
  state.trace().append("-Z", {}, 0, control);
}

/// Q = A (I - 2|0><0|) A^dagger (I (x) -Z), applied right to left.
template <typename Real>
void apply_qae_operator(BasicStateVector<Real>& state, const Oracle& oracle, const ScenarioDistribution& dist,
                        const AngleSchedule& schedule, std::uint64_t control = 0) {
  apply_minus_z(state, control);
  apply_marking_operator_adjoint(state, oracle, dist, schedule, control);
  apply_zero_reflection(state, control);
  apply_marking_operator(state, oracle, dist, schedule, control);
}

/// H^m on the sample register.
template <typename Real>
void apply_sample_hadamards(BasicStateVector<Real>& state) {
  if (state.layout().m == 0) return;
  detail::for_each_slice(state, 0, state.layout().m, 0, [](auto& slice) { detail::walsh_hadamard(slice); });
  state.trace().append("H^m", {}, 0, 0);
}

namespace detail {

template <typename Real>
void apply_fourier(BasicStateVector<Real>& state, Real sign) {
  const auto M = static_cast<Eigen::Index>(state.layout().sample_count());
  const auto rest = static_cast<Eigen::Index>(state.layout().system_dimension());
  using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix F(M, M);
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(M));
  for (Eigen::Index d = 0; d < M; ++d)
    for (Eigen::Index k = 0; k < M; ++k)
      F(d, k) = std::polar(scale, sign * two_pi * static_cast<Real>((d * k) % M) / static_cast<Real>(M));
  // The sample register is the least significant block, so the state is an
  // M x rest column-major matrix with one column per system basis state.
  Eigen::Map<Matrix> grid(state.amplitudes().data(), M, rest);
  grid = (F * grid).eval();
}

}  // namespace detail

/// QFT^dagger on the sample register: |k> -> M^{-1/2} sum_d e^{-2 pi i k d / M} |d>.
template <typename Real>
void qft_inverse(BasicStateVector<Real>& state) {
  detail::apply_fourier(state, Real(-1));
  state.trace().append("QFT^dagger", {}, 0, 0);
}

template <typename Real>
void qft(BasicStateVector<Real>& state) {
  detail::apply_fourier(state, Real(1));
  state.trace().append("QFT", {}, 0, 0);
}

// ---------------------------------------------------------------------------
// Readout

/// Exact marginal distribution of the sample register.
template <typename Real>
Eigen::VectorXd sample_register_distribution(const BasicStateVector<Real>& state) {
  const auto M = static_cast<Eigen::Index>(state.layout().sample_count());
  const auto rest = static_cast<Eigen::Index>(state.layout().system_dimension());
  using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::Map<const Matrix> grid(state.amplitudes().data(), M, rest);
  return grid.cwiseAbs2().rowwise().sum().template cast<double>();
}

/// Total probability of the xi slice.
template <typename Real>
double scenario_probability(const BasicStateVector<Real>& state, std::uint64_t xi) {
  const auto& lay = state.layout();
  const auto width = static_cast<Eigen::Index>(std::uint64_t{1} << lay.scenario_offset());
  return static_cast<double>(
      state.amplitudes().segment(static_cast<Eigen::Index>(xi) * width, width).squaredNorm());
}

/// Probability of measuring (xi, phi) with phi in Phi*_xi.  Reads the marked
/// table without charging: this is measurement post-processing, not a query.
template <typename Real>
double scenario_marked_probability(const BasicStateVector<Real>& state, const Oracle& oracle, std::uint64_t xi) {
  detail::require_oracle_fits(state, oracle);
  const auto& lay = state.layout();
  const auto& table = oracle.marked_table();
  const auto inner = static_cast<Eigen::Index>(std::uint64_t{1} << (lay.ancilla_bits() + lay.m));
  double total = 0.0;
  for (std::uint64_t phi = 0; phi < (std::uint64_t{1} << lay.c); ++phi) {
    if (!table[(xi << lay.c) | phi]) continue;
    const auto start = static_cast<Eigen::Index>(lay.index(xi, phi));
    total += static_cast<double>(state.amplitudes().segment(start, inner).squaredNorm());
  }
  return total;
}

/// Probability of the mark ancilla reading 1.
template <typename Real>
double ancilla_one_probability(const BasicStateVector<Real>& state) {
  const auto& lay = state.layout();
  if (!lay.mark_ancilla) throw StateShapeError("state has no mark ancilla");
  double total = 0.0;
  const std::uint64_t samples = lay.sample_count();
  const auto& a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if ((static_cast<std::uint64_t>(i) / samples) & 1) total += static_cast<double>(std::norm(a[i]));
  return total;
}

/// Throws ConsistencyError when |norm - 1| exceeds `tolerance`.
template <typename Real>
void check_norm(const BasicStateVector<Real>& state, double tolerance, const char* where) {
  const double drift = std::abs(static_cast<double>(state.norm()) - 1.0);
  if (drift > tolerance)
    throw ConsistencyError(std::string(where) + ": norm drift " + std::to_string(drift) + " exceeds tolerance");
}

// ---------------------------------------------------------------------------
// Phase estimation

struct PhaseEstimation {
  int m = 0;
  std::uint64_t M = 0;
  /// Exact Pr[d] for d = 0..M-1.
  Eigen::VectorXd probabilities;
  /// Oracle calls recorded by the run's ledger.
  std::uint64_t oracle_calls = 0;
  double norm_drift = 0.0;
};

/// Full QAE circuit: samples in |+>^m, A on the system, controlled-Q^(2^j)
/// from sample qubit j (as 2^j controlled-Q applications), QFT^dagger, and
/// exact readout of the sample register.
template <typename Real = double>
PhaseEstimation phase_estimation(const Oracle& oracle, const ScenarioDistribution& dist,
                                 const AngleSchedule& schedule, int m) {
  if (m < 1) throw InputError("phase estimation needs m >= 1");
  BasicStateVector<Real> state(RegisterLayout{oracle.scenario_bits(), oracle.decision_bits(), true, m});
  apply_sample_hadamards(state);
  apply_marking_operator(state, oracle, dist, schedule);
  for (int j = 0; j < m; ++j) {
    const std::uint64_t control = std::uint64_t{1} << j;
    for (std::uint64_t rep = 0; rep < control; ++rep) apply_qae_operator(state, oracle, dist, schedule, control);
  }
  qft_inverse(state);

  PhaseEstimation out;
  out.m = m;
  out.M = std::uint64_t{1} << m;
  out.norm_drift = std::abs(static_cast<double>(state.norm()) - 1.0);
  check_norm(state, 1e-7, "phase estimation");
  out.probabilities = sample_register_distribution(state);
  out.oracle_calls = state.trace().oracle_calls();
  return out;
}

/// Shot sampling from an exact outcome distribution.
inline std::vector<std::uint64_t> sample_outcomes(const Eigen::VectorXd& probabilities, std::size_t shots, Rng& rng) {
  std::vector<double> cdf(static_cast<std::size_t>(probabilities.size()));
  double acc = 0.0;
  for (Eigen::Index d = 0; d < probabilities.size(); ++d) cdf[static_cast<std::size_t>(d)] = acc += probabilities[d];
  std::vector<std::uint64_t> out(shots);
  for (auto& d : out) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    d = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), probabilities.size() - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense fast path (tests only)

inline constexpr int kMaxDenseSystemBits = 6;

/// Matrix of a linear operator on the given layout, built column by column
/// from basis states.  Restricted to b + c <= 6.
template <typename Real = double, typename Op>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> dense_matrix(const RegisterLayout& layout, Op&& op) {
  if (layout.b + layout.c > kMaxDenseSystemBits) throw CapacityError("dense matrices are limited to b + c <= 6");
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> out(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    typename BasicStateVector<Real>::Vector basis = BasicStateVector<Real>::Vector::Zero(dim);
    basis[col] = 1;
    BasicStateVector<Real> state(layout, std::move(basis));
    op(state);
    out.col(col) = state.amplitudes();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binary dump: "RQSV", u32 version, u32 b, c, ancilla, m, then
// little-endian f64 (re, im) pairs.

inline void write_statevector(const StateVector& state, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  const auto& lay = state.layout();
  const std::uint32_t header[5] = {1, static_cast<std::uint32_t>(lay.b), static_cast<std::uint32_t>(lay.c),
                                   lay.mark_ancilla ? 1u : 0u, static_cast<std::uint32_t>(lay.m)};
  os.write("RQSV", 4);
  os.write(reinterpret_cast<const char*>(header), sizeof(header));
  os.write(reinterpret_cast<const char*>(state.amplitudes().data()),
           static_cast<std::streamsize>(state.amplitudes().size() * sizeof(std::complex<double>)));
}

inline StateVector read_statevector(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path);
  char magic[4];
  std::uint32_t header[5];
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!is || std::memcmp(magic, "RQSV", 4) != 0 || header[0] != 1) throw ConfigError(path + ": not a statevector dump");
  RegisterLayout lay{static_cast<int>(header[1]), static_cast<int>(header[2]), header[3] != 0,
                     static_cast<int>(header[4])};
  lay.validate();
  StateVector::Vector amps(static_cast<Eigen::Index>(lay.dimension()));
  is.read(reinterpret_cast<char*>(amps.data()), static_cast<std::streamsize>(amps.size() * sizeof(std::complex<double>)));
  if (!is) throw ConfigError(path + ": truncated statevector dump");
  return StateVector(lay, std::move(amps));
}

}  // namespace reqo
