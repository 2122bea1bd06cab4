#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "daqc/dense_sim.hpp"
#include "daqc/pauli_core.hpp"
#include "daqc/scheduler.hpp"

namespace daqc {

/// Constant calibration defect: every coupling of the support drawn uniformly
/// from [-delta, delta].
struct DefectSample {
  CouplingVector h_delta;
  double delta = 0.0;
  std::uint64_t rng_seed = 0;
};

DefectSample sample_defect(const InteractionGraph& support, double delta, std::uint64_t rng_seed);

/// h_P ⊘ h_S restricted to the source support (0/0 -> 0).
CouplingVector coupling_ratio(const CouplingVector& h_problem, const CouplingVector& h_source);

/// delta ||h_P ⊘ h_S||_p|_S + delta (t_A / T) |E_{D\S}|^(1/p). Rejects p = -inf.
double p_norm_error_bound(const CouplingVector& h_problem, const CouplingVector& h_source, double delta,
                          double target_time, double t_a, std::size_t e_ds, double p);

/// Operator-norm bound on the error Hamiltonian; the p = 1 case of the above.
double op_norm_error_bound(const CouplingVector& h_problem, const CouplingVector& h_source, double delta,
                           double target_time, double t_a, std::size_t e_ds);

/// (||h_P ⊘ h_S||_2^2|_S + |E_{D\S}| (t_A/T)^2)^(1/2), the multiplier of
/// ||H_δ||_F in the Frobenius stability inequality.
double frobenius_stability_factor(const CouplingVector& h_problem, const CouplingVector& h_source,
                                  double t_a, double target_time, std::size_t e_ds);

/// Arguments of the expectation-value bounds.
struct ObservableBoundInputs {
  double supp_o = 1;       // qubits the observable acts on
  double op_norm_o = 1;    // ||O||_op
  double deg_p = 0;        // deg of the problem graph
  double deg_ds = 0;       // deg of the unmeasured-defect graph D \ S
  double h_ratio_inf = 0;  // ||h_P ⊘ h_S||_inf
  double delta = 0;
  double target_time = 1;
  double t_a = 0;
};

/// 6 T δ supp(O) deg(P) ||O|| ||h_P⊘h_S||_inf + 6 t_A δ supp(O) deg(D\S) ||O||.
/// Valid in the small-defect, short-time regime; checking that is up to the caller.
double expectation_error_bound(const ObservableBoundInputs& in);

/// The first term of `expectation_error_bound` only.
double mitigated_expectation_bound(const ObservableBoundInputs& in);

/// Largest δ keeping `expectation_error_bound` at or below `max_error`
/// (`in.delta` is ignored). Throws ValidationError on a zero denominator.
double max_allowed_delta(double max_error, const ObservableBoundInputs& in);

/// Unmeasured-defect edge counts for a schedule. Edges of D \ S that the
/// schedule pins to zero signed time are suppressed and drop out of the bounds.
struct DefectEdgeCounts {
  std::size_t e_ds = 0;             // |E_{D\S}|
  std::size_t e_ds_unsuppressed = 0;
  int deg_ds = 0;
  int deg_ds_unsuppressed = 0;
  double max_pinned_signed_time = 0;  // max |sum_k t_k M_{alpha,k}| over pinned edges
};

/// Throws ConsistencyError if a pinned edge carries signed time above
/// tol * max(1, t_A).
DefectEdgeCounts defect_edge_counts(const Schedule& schedule, const CouplingVector& h_source,
                                    const InteractionGraph& defect_support, double tol = 1e-9);

struct ObservableRequest {
  PauliAxis axis = PauliAxis::X;
  int qubit = 0;
  InitialState state = InitialState::AllPlus;
  std::uint64_t state_seed = 0;
};

struct AnalysisOptions {
  int dense_cap = 8;  // exact dense values only up to this many qubits
  std::optional<ObservableRequest> observable;
  int trotter_steps = 1;
  std::vector<double> p_orders{1.0, 2.0, kInfNorm};
  double small_defect_ratio = 1e-2;  // small_defect: δ < ratio * ||h_S||_-inf
  double short_time_limit = 0.1;     // short_time: T ||H_S||_op < limit
};

/// Every analytic bound next to its exact counterpart.
struct BoundReport {
  // Echoed inputs.
  int n_qubits = 0;
  double delta = 0;
  double target_time = 0;
  double t_a = 0;
  std::size_t e_ds = 0;
  std::size_t e_ds_effective = 0;
  int deg_p = 0;
  int deg_ds = 0;
  int deg_ds_effective = 0;
  double ratio_norm_1 = 0;
  double ratio_norm_2 = 0;
  double ratio_norm_inf = 0;
  double supp_o = 1;
  double op_norm_o = 1;

  // Bounds.
  std::vector<std::pair<double, double>> p_norm_bounds;  // (p, bound on ||h_eps||_p)
  double op_norm_bound = 0;
  double op_norm_bound_first_term = 0;
  double frobenius_factor = 0;
  double frob_bound = 0;  // frobenius_factor * ||H_δ||_F
  double expectation_bound = 0;
  double expectation_bound_mitigated = 0;

  // Closed-form norms of the error couplings.
  std::vector<std::pair<double, double>> error_p_norms;  // (p, ||h_eps||_p)
  double delta_frobenius = 0;                            // ||H_δ||_F = 2^(N/2) ||h_δ||_2

  // Dense ground truth (absent above the dense cap).
  std::optional<double> exact_op_norm;
  std::optional<double> exact_frobenius;
  std::optional<double> exact_delta_o;
  std::optional<double> commutator_bound;  // T ||[H_eps, O]||_op, commuting case only
  std::optional<double> source_op_norm;

  bool small_defect = false;
  bool short_time = false;
};

BoundReport analyze(const CouplingVector& h_problem, const CouplingVector& h_source,
                    const InteractionGraph& defect_support, const Schedule& schedule,
                    const DefectSample& defect, const AnalysisOptions& options = {});

}  // namespace daqc
