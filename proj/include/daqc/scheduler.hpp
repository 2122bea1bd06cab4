#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "daqc/lp_solver.hpp"
#include "daqc/pauli_core.hpp"
#include "daqc/sign_blocks.hpp"

namespace daqc {

/// How couplings absent from the source Hamiltonian enter the time equations.
///
/// RemoveZeros drops them (0/0 rows are unconstrained), which minimizes the
/// total analog time. MitigateZeros keeps every row of the defect support and
/// pins the unmeasured ones to zero effective coupling, so any real coupling
/// there is cancelled over the schedule.
enum class SynthesisMode { RemoveZeros, MitigateZeros };

std::string to_string(SynthesisMode mode);
/// Accepts "remove" / "mitigate" (case-insensitive).
SynthesisMode mode_from_string(const std::string& text);

struct Schedule {
  int n_qubits = 0;
  std::vector<GatePattern> patterns;
  Eigen::VectorXd times;
  double target_time = 1.0;
  SynthesisMode mode = SynthesisMode::RemoveZeros;
  /// Keys that were constrained by the time equations (empty for schedules
  /// read back from a file).
  std::vector<CouplingKey> rows;

  std::size_t blocks() const { return patterns.size(); }
  double total_analog_time() const { return times.sum(); }
  /// sum_k t_k * sign_k(key): the accumulated signed evolution time of a coupling.
  double signed_time(const CouplingKey& key) const;

  bool operator==(const Schedule& other) const;
};

struct SynthesisOptions {
  lp::SimplexOptions simplex;
  /// Use the whole pattern alphabet when it has at most this many entries;
  /// otherwise start from 2*rows+1 sampled patterns and double on infeasibility.
  std::uint64_t exhaustive_pattern_limit = 4096;
  double invariant_tol = 1e-9;
};

/// Solves min ||t||_1 s.t. M t = T (h_P ⊘ h_S), t >= 0 over the mode's rows.
///
/// Requires support(h_P) ⊆ support(h_S) ⊆ edges(defect_support). Zero-time
/// blocks are dropped from the returned schedule.
Schedule synthesize(const CouplingVector& h_problem, const CouplingVector& h_source,
                    const InteractionGraph& defect_support, double target_time,
                    SynthesisMode mode, std::uint64_t rng_seed,
                    const SynthesisOptions& options = {});

/// First-order (Trotter) effective couplings when the schedule runs on h_real:
/// (1/T) * sum_k t_k * sign_k(alpha) * h_real[alpha].
CouplingVector effective_couplings(const Schedule& schedule, const CouplingVector& h_real);

/// Closed form of the error couplings: h_P h_δ / h_S on the source support,
/// (signed_time / T) h_δ elsewhere.
CouplingVector closed_form_error(const Schedule& schedule, const CouplingVector& h_problem,
                                 const CouplingVector& h_source, const CouplingVector& h_delta);

/// h_eps = effective_couplings(schedule, h_S + h_δ) - h_P. Throws
/// ConsistencyError if it disagrees with `closed_form_error` beyond `tol`
/// (relative to max(1, |value|)).
CouplingVector error_vector(const Schedule& schedule, const CouplingVector& h_problem,
                            const CouplingVector& h_source, const CouplingVector& h_delta,
                            double tol = 1e-9);

// Text format: `n_qubits=N`, `T=<time>`, `mode=<remove|mitigate>`, then one
// `<pattern> <time>` line per block with 17 significant digits.
void write_schedule(std::ostream& out, const Schedule& schedule);
Schedule read_schedule(std::istream& in);
void save_schedule(const std::string& path, const Schedule& schedule);
Schedule load_schedule(const std::string& path);

}  // namespace daqc
