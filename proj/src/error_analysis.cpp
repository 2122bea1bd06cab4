#include "daqc/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "daqc/errors.hpp"
#include "daqc/rng.hpp"

namespace daqc {

DefectSample sample_defect(const InteractionGraph& support, double delta, std::uint64_t rng_seed) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be positive and finite");
  Rng rng(rng_seed);
  DefectSample s{CouplingVector(support.n_qubits()), delta, rng_seed};
  for (const CouplingKey& key : support.edges()) s.h_delta.set(key, rng.uniform(-delta, delta));
  return s;
}

CouplingVector coupling_ratio(const CouplingVector& h_problem, const CouplingVector& h_source) {
  const InteractionGraph source = support_graph(h_source);
  return hadamard_divide(h_problem, h_source, IndeterminatePolicy::Skip).restricted_to(source.edges());
}

namespace {

void check_times(double target_time, double t_a) {
  if (!(target_time > 0.0) || !std::isfinite(target_time)) throw ValidationError("T must be positive");
  if (!(t_a >= 0.0) || !std::isfinite(t_a)) throw ValidationError("t_A must be nonnegative");
}

}  // namespace

double p_norm_error_bound(const CouplingVector& h_problem, const CouplingVector& h_source, double delta,
                          double target_time, double t_a, std::size_t e_ds, double p) {
  if (p == -kInfNorm) throw ValidationError("the error bound is defined for proper p-norms only");
  if (!(p >= 1.0)) throw ValidationError("norm order must be >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be nonnegative");
  check_times(target_time, t_a);
  const double ratio_norm = vector_p_norm(coupling_ratio(h_problem, h_source), p);
  const double edge_term = p == kInfNorm ? (e_ds > 0 ? 1.0 : 0.0)
                                         : std::pow(static_cast<double>(e_ds), 1.0 / p);
  return delta * ratio_norm + delta * (t_a / target_time) * edge_term;
}

double op_norm_error_bound(const CouplingVector& h_problem, const CouplingVector& h_source, double delta,
                           double target_time, double t_a, std::size_t e_ds) {
  return p_norm_error_bound(h_problem, h_source, delta, target_time, t_a, e_ds, 1.0);
}

double frobenius_stability_factor(const CouplingVector& h_problem, const CouplingVector& h_source,
                                  double t_a, double target_time, std::size_t e_ds) {
  check_times(target_time, t_a);
  const double r2 = vector_p_norm(coupling_ratio(h_problem, h_source), 2.0);
  const double time_ratio = t_a / target_time;
  return std::sqrt(r2 * r2 + static_cast<double>(e_ds) * time_ratio * time_ratio);
}

double expectation_error_bound(const ObservableBoundInputs& in) {
  return mitigated_expectation_bound(in) + 6.0 * in.t_a * in.delta * in.supp_o * in.deg_ds * in.op_norm_o;
}

double mitigated_expectation_bound(const ObservableBoundInputs& in) {
  return 6.0 * in.target_time * in.delta * in.supp_o * in.deg_p * in.op_norm_o * in.h_ratio_inf;
}

double max_allowed_delta(double max_error, const ObservableBoundInputs& in) {
  const double denom = 6.0 * in.supp_o * in.op_norm_o *
                       (in.target_time * in.deg_p * in.h_ratio_inf + in.t_a * in.deg_ds);
  if (!(denom > 0.0)) throw ValidationError("max_allowed_delta: degenerate inputs give a zero denominator");
  return max_error / denom;
}

DefectEdgeCounts defect_edge_counts(const Schedule& schedule, const CouplingVector& h_source,
                                    const InteractionGraph& defect_support, double tol) {
  const InteractionGraph unmeasured = graph_difference(defect_support, support_graph(h_source));
  const double limit = tol * std::max(1.0, schedule.total_analog_time());
  const std::set<CouplingKey> rows(schedule.rows.begin(), schedule.rows.end());

  DefectEdgeCounts c;
  c.e_ds = unmeasured.edge_count();
  c.deg_ds = degree(unmeasured);
  InteractionGraph live(defect_support.n_qubits());
  for (const CouplingKey& key : unmeasured.edges()) {
    const double signed_time = std::abs(schedule.signed_time(key));
    const bool pinned = schedule.mode == SynthesisMode::MitigateZeros && signed_time <= limit;
    if (rows.count(key) && schedule.mode == SynthesisMode::MitigateZeros && !pinned) {
      throw ConsistencyError("mitigated coupling " + to_string(key) + " carries signed time " +
                             format_double(signed_time));
    }
    if (pinned) {
      c.max_pinned_signed_time = std::max(c.max_pinned_signed_time, signed_time);
    } else {
      live.add(key);
    }
  }
  c.e_ds_unsuppressed = live.edge_count();
  c.deg_ds_unsuppressed = degree(live);
  return c;
}

BoundReport analyze(const CouplingVector& h_problem, const CouplingVector& h_source,
                    const InteractionGraph& defect_support, const Schedule& schedule,
                    const DefectSample& defect, const AnalysisOptions& options) {
  const int n = h_source.n_qubits();
  if (h_problem.n_qubits() != n || defect_support.n_qubits() != n || schedule.n_qubits != n ||
      defect.h_delta.n_qubits() != n) {
    throw ValidationError("analysis inputs disagree on the qubit count");
  }
  const CouplingVector ratio = coupling_ratio(h_problem, h_source);
  const DefectEdgeCounts counts = defect_edge_counts(schedule, h_source, defect_support);

  BoundReport r;
  r.n_qubits = n;
  r.delta = defect.delta;
  r.target_time = schedule.target_time;
  r.t_a = schedule.total_analog_time();
  r.e_ds = counts.e_ds;
  r.e_ds_effective = counts.e_ds_unsuppressed;
  r.deg_p = degree(support_graph(h_problem));
  r.deg_ds = counts.deg_ds;
  r.deg_ds_effective = counts.deg_ds_unsuppressed;
  r.ratio_norm_1 = vector_p_norm(ratio, 1.0);
  r.ratio_norm_2 = vector_p_norm(ratio, 2.0);
  r.ratio_norm_inf = vector_p_norm(ratio, kInfNorm);

  for (double p : options.p_orders) {
    r.p_norm_bounds.emplace_back(
        p, p_norm_error_bound(h_problem, h_source, r.delta, r.target_time, r.t_a, r.e_ds_effective, p));
  }
  r.op_norm_bound = op_norm_error_bound(h_problem, h_source, r.delta, r.target_time, r.t_a, r.e_ds_effective);
  r.op_norm_bound_first_term = op_norm_error_bound(h_problem, h_source, r.delta, r.target_time, r.t_a, 0);
  r.frobenius_factor = frobenius_stability_factor(h_problem, h_source, r.t_a, r.target_time, r.e_ds_effective);

  const CouplingVector h_eps = error_vector(schedule, h_problem, h_source, defect.h_delta);
  for (double p : options.p_orders) r.error_p_norms.emplace_back(p, vector_p_norm(h_eps, p));
  r.delta_frobenius = std::pow(2.0, 0.5 * n) * vector_p_norm(defect.h_delta, 2.0);
  r.frob_bound = r.frobenius_factor * r.delta_frobenius;

  std::optional<ObservableSpec<double>> observable;
  if (options.observable && n <= options.dense_cap) {
    observable = single_qubit_observable(n, options.observable->qubit, options.observable->axis, options.dense_cap);
    r.supp_o = static_cast<double>(observable->support.size());
    r.op_norm_o = observable->op_norm;
  }

  const ObservableBoundInputs in{r.supp_o,         r.op_norm_o, static_cast<double>(r.deg_p),
                                 static_cast<double>(r.deg_ds_effective),
                                 r.ratio_norm_inf, r.delta,     r.target_time, r.t_a};
  r.expectation_bound = expectation_error_bound(in);
  r.expectation_bound_mitigated = mitigated_expectation_bound(in);

  double source_norm_estimate = vector_p_norm(h_source, 1.0);
  if (n <= options.dense_cap) {
    const auto dense_eps = build_dense(h_eps, options.dense_cap);
    r.exact_op_norm = operator_norm(dense_eps);
    r.exact_frobenius = frobenius_norm(dense_eps);
    r.source_op_norm = operator_norm(build_dense(h_source, options.dense_cap));
    source_norm_estimate = *r.source_op_norm;
    if (observable) {
      const auto rho = product_density(n, options.observable->state, options.observable->state_seed,
                                       options.dense_cap);
      r.exact_delta_o = expectation_deviation(h_problem, schedule, h_source + defect.h_delta, rho, *observable,
                                              r.target_time, options.trotter_steps, options.dense_cap);
      if (zz_only(h_problem) && zz_only(h_eps)) {
        r.commutator_bound = r.target_time * commutator_norm(dense_eps.matrix, observable->matrix);
      }
    }
  }

  const CouplingVector measured = h_source.restricted_to(support_graph(h_source).edges());
  r.small_defect = !measured.empty() && r.delta < options.small_defect_ratio * vector_p_norm(measured, -kInfNorm);
  r.short_time = r.target_time * source_norm_estimate < options.short_time_limit;
  return r;
}

}  // namespace daqc
