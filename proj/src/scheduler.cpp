#include "daqc/scheduler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "daqc/errors.hpp"

namespace daqc {

std::string to_string(SynthesisMode mode) {
  return mode == SynthesisMode::RemoveZeros ? "remove" : "mitigate";
}

SynthesisMode mode_from_string(const std::string& text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "remove" || s == "removezeros") return SynthesisMode::RemoveZeros;
  if (s == "mitigate" || s == "mitigatezeros") return SynthesisMode::MitigateZeros;
  throw ValidationError("unknown synthesis mode '" + text + "'");
}

double Schedule::signed_time(const CouplingKey& key) const {
  double s = 0.0;
  for (std::size_t k = 0; k < patterns.size(); ++k)
    s += times(static_cast<Eigen::Index>(k)) * block_sign(patterns[k], key);
  return s;
}

bool Schedule::operator==(const Schedule& other) const {
  return n_qubits == other.n_qubits && patterns == other.patterns &&
         times.size() == other.times.size() && times == other.times &&
         target_time == other.target_time && mode == other.mode && rows == other.rows;
}

namespace {

void check_invariants(const Schedule& schedule, const CouplingVector& h_problem,
                      const CouplingVector& h_source, double tol) {
  const double t_a = schedule.total_analog_time();
  for (const CouplingKey& key : schedule.rows) {
    const double hs = h_source[key];
    if (hs != 0.0) {
      const double replay = schedule.signed_time(key) / schedule.target_time * hs;
      const double target = h_problem[key];
      if (std::abs(replay - target) > tol * std::max(1.0, std::abs(target))) {
        throw ConsistencyError("schedule replays " + format_double(replay) + " at " +
                               to_string(key) + " instead of " + format_double(target));
      }
    } else if (std::abs(schedule.signed_time(key)) > tol * std::max(1.0, t_a)) {
      throw ConsistencyError("pinned coupling " + to_string(key) + " accumulates signed time " +
                             format_double(schedule.signed_time(key)));
    }
  }
}

}  // namespace

Schedule synthesize(const CouplingVector& h_problem, const CouplingVector& h_source,
                    const InteractionGraph& defect_support, double target_time,
                    SynthesisMode mode, std::uint64_t rng_seed, const SynthesisOptions& options) {
  const int n = h_source.n_qubits();
  if (h_problem.n_qubits() != n || defect_support.n_qubits() != n) {
    throw ValidationError("problem, source and defect support must share the qubit count");
  }
  if (!(target_time > 0.0) || !std::isfinite(target_time)) {
    throw ValidationError("target time must be positive and finite");
  }
  const InteractionGraph source_graph = support_graph(h_source);
  const InteractionGraph problem_graph = support_graph(h_problem);
  if (!problem_graph.is_subgraph_of(source_graph)) {
    for (const auto& key : problem_graph.edges())
      if (!source_graph.contains(key))
        throw SimulabilityError("problem coupling " + to_string(key) + " has no source coupling");
  }
  if (!source_graph.is_subgraph_of(defect_support)) {
    throw ValidationError("source support is not contained in the defect support");
  }

  const CouplingVector ratio = hadamard_divide(h_problem, h_source, IndeterminatePolicy::Skip);

  std::vector<CouplingKey> rows;
  const auto& row_set = mode == SynthesisMode::RemoveZeros ? source_graph.edges() : defect_support.edges();
  rows.assign(row_set.begin(), row_set.end());

  Schedule schedule;
  schedule.n_qubits = n;
  schedule.target_time = target_time;
  schedule.mode = mode;
  schedule.rows = rows;
  schedule.times = Eigen::VectorXd(0);
  if (rows.empty()) return schedule;

  lp::LinearProgram<double> program;
  program.rhs.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    program.rhs(static_cast<Eigen::Index>(a)) =
        source_graph.contains(rows[a]) ? target_time * ratio[rows[a]] : 0.0;
  }

  const InteractionGraph row_graph(n, std::set<CouplingKey>(rows.begin(), rows.end()));
  const std::uint64_t total = pattern_alphabet_size(row_graph);
  std::uint64_t requested = total <= options.exhaustive_pattern_limit
                                ? total
                                : std::min<std::uint64_t>(total, 2 * rows.size() + 1);

  for (;;) {
    const std::vector<GatePattern> candidates = generate_candidate_patterns(row_graph, requested, rng_seed);
    const SignMatrix m = build_sign_matrix(candidates, rows);
    program.constraints = m.entries.cast<double>();
    const lp::LpSolution<double> solution = lp::solve(program, options.simplex);
    if (solution.optimal()) {
      std::vector<double> kept;
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double t = solution.times(static_cast<Eigen::Index>(k));
        if (t > 0.0) {
          schedule.patterns.push_back(candidates[k]);
          kept.push_back(t);
        }
      }
      schedule.times = Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
      break;
    }
    if (requested >= total) {
      throw InfeasibleError("no nonnegative schedule exists over all " + std::to_string(total) +
                            " gate patterns");
    }
    requested = std::min(total, requested * 2);
  }

  check_invariants(schedule, h_problem, h_source, options.invariant_tol);
  return schedule;
}

CouplingVector effective_couplings(const Schedule& schedule, const CouplingVector& h_real) {
  if (h_real.n_qubits() != schedule.n_qubits) throw ValidationError("qubit count mismatch");
  std::set<CouplingKey> keys(schedule.rows.begin(), schedule.rows.end());
  for (const auto& kv : h_real) keys.insert(kv.first);
  CouplingVector out(schedule.n_qubits);
  for (const CouplingKey& key : keys)
    out.set(key, schedule.signed_time(key) / schedule.target_time * h_real[key]);
  return out;
}

CouplingVector closed_form_error(const Schedule& schedule, const CouplingVector& h_problem,
                                 const CouplingVector& h_source, const CouplingVector& h_delta) {
  std::set<CouplingKey> keys(schedule.rows.begin(), schedule.rows.end());
  for (const auto* v : {&h_problem, &h_source, &h_delta})
    for (const auto& kv : *v) keys.insert(kv.first);
  CouplingVector out(schedule.n_qubits);
  for (const CouplingKey& key : keys) {
    const double hs = h_source[key];
    if (hs != 0.0) {
      out.set(key, h_problem[key] * h_delta[key] / hs);
    } else {
      out.set(key, schedule.signed_time(key) / schedule.target_time * h_delta[key] - h_problem[key]);
    }
  }
  return out;
}

CouplingVector error_vector(const Schedule& schedule, const CouplingVector& h_problem,
                            const CouplingVector& h_source, const CouplingVector& h_delta,
                            double tol) {
  const CouplingVector summed = effective_couplings(schedule, h_source + h_delta) - h_problem;
  const CouplingVector closed = closed_form_error(schedule, h_problem, h_source, h_delta);
  for (const auto& [key, value] : closed) {
    if (std::abs(summed[key] - value) > tol * std::max(1.0, std::abs(value))) {
      throw ConsistencyError("error coupling at " + to_string(key) + " is " + format_double(summed[key]) +
                             " by summation but " + format_double(value) + " in closed form");
    }
  }
  return summed;
}

// ---------------------------------------------------------------------------

void write_schedule(std::ostream& out, const Schedule& schedule) {
  out << "n_qubits=" << schedule.n_qubits << '\n';
  out << "T=" << format_double(schedule.target_time) << '\n';
  out << "mode=" << to_string(schedule.mode) << '\n';
  for (std::size_t k = 0; k < schedule.patterns.size(); ++k) {
    out << schedule.patterns[k].to_string() << ' '
        << format_double(schedule.times(static_cast<Eigen::Index>(k))) << '\n';
  }
}

Schedule read_schedule(std::istream& in) {
  Schedule schedule;
  bool have_n = false, have_t = false, have_mode = false;
  std::vector<double> times;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = "schedule line " + std::to_string(line_no) + ": ";
    const std::string& head = tok[0];
    if (tok.size() == 1 && head.rfind("n_qubits=", 0) == 0) {
      schedule.n_qubits = std::stoi(head.substr(9));
      have_n = true;
    } else if (tok.size() == 1 && head.rfind("T=", 0) == 0) {
      schedule.target_time = parse_double(head.substr(2));
      have_t = true;
    } else if (tok.size() == 1 && head.rfind("mode=", 0) == 0) {
      schedule.mode = mode_from_string(head.substr(5));
      have_mode = true;
    } else if (tok.size() == 2) {
      if (!have_n) throw ValidationError(where + "block before n_qubits header");
      GatePattern p = GatePattern::from_string(tok[0]);
      if (p.size() != schedule.n_qubits) throw ValidationError(where + "pattern length mismatch");
      const double t = parse_double(tok[1]);
      if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError(where + "block time must be >= 0");
      schedule.patterns.push_back(std::move(p));
      times.push_back(t);
    } else {
      throw ValidationError(where + "unrecognized line");
    }
  }
  if (!have_n || !have_t || !have_mode) throw ValidationError("schedule header incomplete");
  if (schedule.n_qubits <= 0 || !(schedule.target_time > 0.0)) throw ValidationError("invalid schedule header");
  schedule.times = Eigen::Map<const Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
  return schedule;
}

void save_schedule(const std::string& path, const Schedule& schedule) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  write_schedule(out, schedule);
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_schedule(in);
}

}  // namespace daqc
