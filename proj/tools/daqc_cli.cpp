// Command-line front end: synth, analyze, sweep, summarize.

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "daqc/error_analysis.hpp"
#include "daqc/errors.hpp"
#include "daqc/harness.hpp"
#include "daqc/pauli_core.hpp"
#include "daqc/scheduler.hpp"

namespace {

using namespace daqc;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitConsistency = 4;

// "x0", "z3", ... or "none".
std::optional<ObservableRequest> parse_observable(const std::string& text, const std::string& state) {
  if (text.empty() || text == "none") return std::nullopt;
  ObservableRequest req;
  req.axis = axis_from_char(static_cast<char>(std::tolower(static_cast<unsigned char>(text[0]))));
  const std::string digits = text.substr(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("observable must look like x0, y2, z1 (axis then qubit)");
  req.qubit = std::stoi(digits);
  req.state = initial_state_from_string(state);
  return req;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

// Every (i, j) pair with each axis pair that occurs somewhere in h.
InteractionGraph all_to_all_like(const CouplingVector& h) {
  std::set<std::pair<PauliAxis, PauliAxis>> axes;
  for (const auto& kv : h) axes.emplace(kv.first.mu, kv.first.nu);
  InteractionGraph g(h.n_qubits());
  for (int i = 0; i < h.n_qubits(); ++i)
    for (int j = i + 1; j < h.n_qubits(); ++j)
      for (const auto& [mu, nu] : axes) g.add(CouplingKey{i, j, mu, nu});
  return g;
}

json pairs_to_json(const std::vector<std::pair<double, double>>& pairs) {
  json out = json::array();
  for (const auto& [p, v] : pairs) out.push_back({{"p", std::isinf(p) ? json("inf") : json(p)}, {"value", v}});
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json report_to_json(const BoundReport& r, const Schedule& schedule) {
  return json{{"n_qubits", r.n_qubits},
              {"mode", to_string(schedule.mode)},
              {"blocks", schedule.blocks()},
              {"delta", r.delta},
              {"T", r.target_time},
              {"t_A", r.t_a},
              {"e_ds", r.e_ds},
              {"e_ds_effective", r.e_ds_effective},
              {"deg_p", r.deg_p},
              {"deg_ds", r.deg_ds},
              {"deg_ds_effective", r.deg_ds_effective},
              {"ratio_norm_1", r.ratio_norm_1},
              {"ratio_norm_2", r.ratio_norm_2},
              {"ratio_norm_inf", r.ratio_norm_inf},
              {"supp_o", r.supp_o},
              {"op_norm_o", r.op_norm_o},
              {"p_norm_bounds", pairs_to_json(r.p_norm_bounds)},
              {"error_p_norms", pairs_to_json(r.error_p_norms)},
              {"op_norm_bound", r.op_norm_bound},
              {"op_norm_bound_first_term", r.op_norm_bound_first_term},
              {"frobenius_factor", r.frobenius_factor},
              {"delta_frobenius", r.delta_frobenius},
              {"frob_bound", r.frob_bound},
              {"expectation_bound", r.expectation_bound},
              {"expectation_bound_mitigated", r.expectation_bound_mitigated},
              {"exact_op_norm", optional_json(r.exact_op_norm)},
              {"exact_frob", optional_json(r.exact_frobenius)},
              {"exact_delta_O", optional_json(r.exact_delta_o)},
              {"commutator_bound", optional_json(r.commutator_bound)},
              {"source_op_norm", optional_json(r.source_op_norm)},
              {"small_defect", r.small_defect},
              {"short_time", r.short_time}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-analog schedule synthesis and error-bound analysis"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Solve for a schedule that simulates a problem Hamiltonian");
  std::string problem_path, source_path, defects_path, schedule_out;
  double synth_time = 1.0;
  std::string synth_mode = "remove";
  std::uint64_t synth_seed = 0;
  synth->add_option("--problem", problem_path, "Problem couplings file")->required();
  synth->add_option("--source", source_path, "Source couplings file")->required();
  synth->add_option("--defects", defects_path, "Defect support (couplings file; values ignored)")->required();
  synth->add_option("--time", synth_time, "Target simulation time T");
  synth->add_option("--mode", synth_mode, "remove | mitigate");
  synth->add_option("--seed", synth_seed, "Seed for sampled gate patterns");
  synth->add_option("--out", schedule_out, "Schedule output file")->required();

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Evaluate the error bounds of a schedule under a sampled defect");
  std::string an_schedule, an_source, an_problem, an_defects, an_observable = "none", an_state = "plus";
  double an_delta = 0.0;
  std::uint64_t an_seed = 0;
  bool an_json = false;
  int an_cap = 8, an_q = 1;
  analyze_cmd->add_option("--schedule", an_schedule, "Schedule file")->required();
  analyze_cmd->add_option("--source", an_source, "Source couplings file")->required();
  analyze_cmd->add_option("--delta", an_delta, "Defect scale: couplings drawn from [-delta, delta]")->required();
  analyze_cmd->add_option("--seed", an_seed, "Defect sampling seed");
  analyze_cmd->add_flag("--json", an_json, "Print the report as JSON");
  analyze_cmd->add_option("--problem", an_problem, "Problem couplings (default: the schedule replayed on the source)");
  analyze_cmd->add_option("--defects", an_defects, "Defect support (default: all pairs over the source axes)");
  analyze_cmd->add_option("--observable", an_observable, "Observable such as x0 (axis, qubit) or none");
  analyze_cmd->add_option("--state", an_state, "Initial state: zero | plus | haar");
  analyze_cmd->add_option("--dense-cap", an_cap, "Largest N for dense exact values");
  analyze_cmd->add_option("--q", an_q, "Trotter steps for the faulty replay");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over random problems, one CSV row per trial");
  std::string sw_topology = "nn", sw_mode = "remove", sw_out, sw_defects, sw_observable = "none", sw_state = "plus";
  ExperimentConfig cfg;
  sweep->add_option("--topology", sw_topology, "nn | random | ata");
  sweep->add_option("--n-min", cfg.n_min, "Smallest system size");
  sweep->add_option("--n-max", cfg.n_max, "Largest system size");
  sweep->add_option("--trials", cfg.trials, "Trials per system size");
  sweep->add_option("--delta", cfg.delta, "Defect scale");
  sweep->add_option("--g", cfg.g, "Coupling scale: magnitudes drawn from [g/2, 3g/2]");
  sweep->add_option("--time", cfg.target_time, "Target simulation time T");
  sweep->add_option("--mode", sw_mode, "remove | mitigate");
  sweep->add_option("--seed", cfg.master_seed, "Master seed");
  sweep->add_option("--out", sw_out, "Results CSV")->required();
  sweep->add_option("--extra-edge-prob", cfg.extra_edge_prob, "Extra-edge probability for random topologies");
  sweep->add_option("--defect-kind", sw_defects, "nnn | ata (default: nnn for nn, ata otherwise)");
  sweep->add_option("--observable", sw_observable, "Observable such as x0, or none");
  sweep->add_option("--state", sw_state, "Initial state: zero | plus | haar");
  sweep->add_option("--q", cfg.trotter_steps, "Trotter steps for the faulty replay");
  sweep->add_option("--dense-cap", cfg.dense_cap, "Largest N for dense exact values");
  sweep->add_option("--threads", cfg.threads, "Worker threads");

  // summarize
  auto* summarize_cmd = app.add_subcommand("summarize", "Per-group mean, median and quartiles of a results CSV");
  std::string sum_in, sum_out;
  summarize_cmd->add_option("--in", sum_in, "Results CSV")->required();
  summarize_cmd->add_option("--out", sum_out, "Summary CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*synth) {
      const CouplingVector h_p = load_couplings(problem_path);
      const CouplingVector h_s = load_couplings(source_path);
      const InteractionGraph d = declared_graph(load_couplings(defects_path));
      const Schedule schedule = synthesize(h_p, h_s, d, synth_time, mode_from_string(synth_mode), synth_seed);
      save_schedule(schedule_out, schedule);
      std::cerr << "blocks=" << schedule.blocks() << " t_A=" << format_double(schedule.total_analog_time())
                << '\n';
    } else if (*analyze_cmd) {
      const Schedule schedule = load_schedule(an_schedule);
      const CouplingVector h_s = load_couplings(an_source);
      CouplingVector h_p(h_s.n_qubits());
      if (!an_problem.empty()) {
        h_p = load_couplings(an_problem);
      } else {
        const CouplingVector replay = effective_couplings(schedule, h_s);
        for (const auto& [key, value] : replay)
          if (h_s[key] != 0.0) h_p.set(key, value);
      }
      const InteractionGraph d =
          an_defects.empty() ? all_to_all_like(h_s) : declared_graph(load_couplings(an_defects));
      const DefectSample defect = sample_defect(d, an_delta, an_seed);
      AnalysisOptions options;
      options.dense_cap = an_cap;
      options.trotter_steps = an_q;
      options.observable = parse_observable(an_observable, an_state);
      if (options.observable) options.observable->state_seed = an_seed;
      const BoundReport report = analyze(h_p, h_s, d, schedule, defect, options);
      const json j = report_to_json(report, schedule);
      if (an_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        for (const auto& [key, value] : j.items()) std::cout << key << " = " << value.dump() << '\n';
      }
    } else if (*sweep) {
      cfg.topology = topology_from_string(sw_topology);
      cfg.mode = mode_from_string(sw_mode);
      if (!sw_defects.empty()) cfg.defect_kind = defect_kind_from_string(sw_defects);
      cfg.observable = parse_observable(sw_observable, sw_state);
      const std::vector<TrialRecord> records = run_experiment(cfg);
      std::ofstream out = open_out(sw_out);
      write_records_csv(out, records);
      if (!out) throw ValidationError("failed writing " + sw_out);
    } else if (*summarize_cmd) {
      std::ifstream in(sum_in);
      if (!in) throw ValidationError("cannot open " + sum_in);
      const Summary summary = summarize(read_records_csv(in));
      for (const std::string& w : summary.warnings) std::cerr << "warning: " << w << '\n';
      std::ofstream out = open_out(sum_out);
      write_summary_csv(out, summary);
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
