#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "daqc/error_analysis.hpp"
#include "daqc/pauli_core.hpp"
#include "daqc/scheduler.hpp"

namespace daqc {

enum class TopologyKind { NearestNeighbour, RandomConnected, AllToAll };
enum class DefectKind { SecondNeighbour, AllToAll };

/// "nn", "random", "ata".
std::string to_string(TopologyKind kind);
TopologyKind topology_from_string(const std::string& text);
/// "nnn", "ata".
std::string to_string(DefectKind kind);
DefectKind defect_kind_from_string(const std::string& text);
/// Second-neighbour defects for chains, all-to-all otherwise.
DefectKind default_defect_kind(TopologyKind kind);

struct TopologySpec {
  TopologyKind kind = TopologyKind::NearestNeighbour;
  int n_qubits = 3;
  double extra_edge_prob = 0.2;  // RandomConnected only
  DefectKind defect_kind = DefectKind::SecondNeighbour;
};

struct Problem {
  CouplingVector h_problem;
  CouplingVector h_source;
  InteractionGraph defect_support;
};

/// ZZ problem and source couplings on a shared support, each magnitude drawn
/// from U[g/2, 3g/2] with a fair-coin sign, h_P and h_S independently.
/// RandomConnected is the NN chain plus each other pair with extra_edge_prob.
Problem generate_problem(const TopologySpec& spec, double g, std::uint64_t rng_seed);

struct ExperimentConfig {
  TopologyKind topology = TopologyKind::NearestNeighbour;
  std::optional<DefectKind> defect_kind;  // default_defect_kind(topology) if unset
  double extra_edge_prob = 0.2;
  int n_min = 3;
  int n_max = 7;
  int trials = 500;
  double target_time = 1.0;
  double g = 100.0;
  double delta = 10.0;
  SynthesisMode mode = SynthesisMode::RemoveZeros;
  std::uint64_t master_seed = 0;
  std::optional<ObservableRequest> observable;
  int trotter_steps = 1;
  int dense_cap = 8;
  /// Worker threads. Each holds a few 4^N matrices, so keep
  /// threads * 16 * 4^dense_cap bytes within memory.
  int threads = 1;

  TopologySpec topology_for(int n_qubits) const;
};

struct TrialRecord {
  int trial_id = 0;
  int n_qubits = 0;
  TopologyKind topology = TopologyKind::NearestNeighbour;
  SynthesisMode mode = SynthesisMode::RemoveZeros;
  std::uint64_t seed = 0;
  double t_a = 0;
  std::optional<double> exact_op_norm;
  double bound_op_norm = 0;
  std::optional<double> exact_frob;
  double frob_bound = 0;
  double expectation_bound = 0;
  double expectation_bound_mitigated = 0;
  std::optional<double> exact_delta_o;
  bool small_defect = false;
  bool short_time = false;

  bool operator==(const TrialRecord&) const = default;
};

/// Per-trial seeds: problem, synthesis, defect and initial state each get
/// their own stream derived from the trial seed.
struct TrialSeeds {
  std::uint64_t trial;
  std::uint64_t problem;
  std::uint64_t synthesis;
  std::uint64_t defect;
  std::uint64_t state;
};
TrialSeeds trial_seeds(std::uint64_t master_seed, int n_qubits, int trial_id);

struct TrialResult {
  Problem problem;
  Schedule schedule;
  DefectSample defect;
  BoundReport report;
  TrialRecord record;
};

/// One full trial. Library errors are rethrown as the same type with the
/// trial seed prepended.
TrialResult run_trial(const ExperimentConfig& config, int n_qubits, int trial_id);

/// Records sorted by (N, trial_id); identical for any thread count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

extern const char* const kCsvHeader;
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);

/// Mean, median and quartiles; quantiles interpolate linearly between order
/// statistics at position q * (n - 1).
struct Stats {
  std::size_t count = 0;
  double mean = 0, median = 0, q25 = 0, q75 = 0;
};
Stats describe(std::vector<double> values);
double quantile_sorted(const std::vector<double>& sorted, double q);

struct SummaryRow {
  int n_qubits = 0;
  TopologyKind topology = TopologyKind::NearestNeighbour;
  SynthesisMode mode = SynthesisMode::RemoveZeros;
  std::size_t records = 0;
  std::optional<Stats> exact_op_norm;  // absent when no record carries it
  Stats bound_op_norm;
  Stats t_a;
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

Summary summarize(const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const Summary& summary);

}  // namespace daqc
