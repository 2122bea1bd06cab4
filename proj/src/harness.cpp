#include "daqc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "daqc/errors.hpp"
#include "daqc/rng.hpp"

namespace daqc {

namespace {

std::string lower(const std::string& text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return s;
}

}  // namespace

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::NearestNeighbour: return "nn";
    case TopologyKind::RandomConnected: return "random";
    case TopologyKind::AllToAll: return "ata";
  }
  return "?";
}

TopologyKind topology_from_string(const std::string& text) {
  const std::string s = lower(text);
  if (s == "nn") return TopologyKind::NearestNeighbour;
  if (s == "random") return TopologyKind::RandomConnected;
  if (s == "ata") return TopologyKind::AllToAll;
  throw ValidationError("unknown topology '" + text + "' (expected nn, random or ata)");
}

std::string to_string(DefectKind kind) {
  return kind == DefectKind::SecondNeighbour ? "nnn" : "ata";
}

DefectKind defect_kind_from_string(const std::string& text) {
  const std::string s = lower(text);
  if (s == "nnn") return DefectKind::SecondNeighbour;
  if (s == "ata") return DefectKind::AllToAll;
  throw ValidationError("unknown defect kind '" + text + "' (expected nnn or ata)");
}

DefectKind default_defect_kind(TopologyKind kind) {
  return kind == TopologyKind::NearestNeighbour ? DefectKind::SecondNeighbour : DefectKind::AllToAll;
}

Problem generate_problem(const TopologySpec& spec, double g, std::uint64_t rng_seed) {
  const int n = spec.n_qubits;
  if (n < 2) throw ValidationError("topologies need at least two qubits");
  if (!(g > 0.0) || !std::isfinite(g)) throw ValidationError("coupling scale g must be positive");
  if (!(spec.extra_edge_prob >= 0.0 && spec.extra_edge_prob <= 1.0))
    throw ValidationError("extra_edge_prob must lie in [0, 1]");

  Rng rng(rng_seed);
  InteractionGraph support(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool keep = false;
      switch (spec.kind) {
        case TopologyKind::NearestNeighbour: keep = j == i + 1; break;
        case TopologyKind::AllToAll: keep = true; break;
        case TopologyKind::RandomConnected: keep = j == i + 1 || rng.bernoulli(spec.extra_edge_prob); break;
      }
      if (keep) support.add(CouplingKey::zz(i, j));
    }
  }

  auto draw = [&](CouplingVector& h) {
    for (const CouplingKey& key : support.edges()) {
      const double magnitude = rng.uniform(0.5 * g, 1.5 * g);
      h.set(key, rng.coin() ? magnitude : -magnitude);
    }
  };
  Problem p{CouplingVector(n), CouplingVector(n), support};
  draw(p.h_problem);
  draw(p.h_source);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (spec.defect_kind == DefectKind::AllToAll || j - i <= 2) p.defect_support.add(CouplingKey::zz(i, j));
  return p;
}

TopologySpec ExperimentConfig::topology_for(int n_qubits) const {
  return TopologySpec{topology, n_qubits, extra_edge_prob, defect_kind.value_or(default_defect_kind(topology))};
}

TrialSeeds trial_seeds(std::uint64_t master_seed, int n_qubits, int trial_id) {
  const std::uint64_t trial =
      derive_seed(master_seed, static_cast<std::uint64_t>(n_qubits), static_cast<std::uint64_t>(trial_id));
  return {trial, derive_seed(trial, 1), derive_seed(trial, 2), derive_seed(trial, 3), derive_seed(trial, 4)};
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with(const std::string& prefix, const E& e) {
  throw E(prefix + e.what());
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, int n_qubits, int trial_id) {
  const TrialSeeds seeds = trial_seeds(config.master_seed, n_qubits, trial_id);
  const std::string where = "trial " + std::to_string(trial_id) + " (N=" + std::to_string(n_qubits) +
                            ", seed " + std::to_string(seeds.trial) + "): ";
  try {
    TrialResult r;
    r.problem = generate_problem(config.topology_for(n_qubits), config.g, seeds.problem);
    r.schedule = synthesize(r.problem.h_problem, r.problem.h_source, r.problem.defect_support,
                            config.target_time, config.mode, seeds.synthesis);
    r.defect = sample_defect(r.problem.defect_support, config.delta, seeds.defect);

    AnalysisOptions options;
    options.dense_cap = config.dense_cap;
    options.trotter_steps = config.trotter_steps;
    if (config.observable) {
      options.observable = *config.observable;
      options.observable->state_seed = seeds.state;
    }
    r.report = analyze(r.problem.h_problem, r.problem.h_source, r.problem.defect_support, r.schedule, r.defect,
                       options);

    TrialRecord& rec = r.record;
    rec.trial_id = trial_id;
    rec.n_qubits = n_qubits;
    rec.topology = config.topology;
    rec.mode = config.mode;
    rec.seed = seeds.trial;
    rec.t_a = r.report.t_a;
    rec.exact_op_norm = r.report.exact_op_norm;
    rec.bound_op_norm = r.report.op_norm_bound;
    rec.exact_frob = r.report.exact_frobenius;
    rec.frob_bound = r.report.frob_bound;
    rec.expectation_bound = r.report.expectation_bound;
    rec.expectation_bound_mitigated = r.report.expectation_bound_mitigated;
    rec.exact_delta_o = r.report.exact_delta_o;
    rec.small_defect = r.report.small_defect;
    rec.short_time = r.report.short_time;
    return r;
  } catch (const SolverStallError& e) {
    rethrow_with(where, e);
  } catch (const ConsistencyError& e) {
    rethrow_with(where, e);
  } catch (const InfeasibleError& e) {
    rethrow_with(where, e);
  } catch (const LookupError& e) {
    rethrow_with(where, e);
  } catch (const SimulabilityError& e) {
    rethrow_with(where, e);
  } catch (const ExhaustionError& e) {
    rethrow_with(where, e);
  } catch (const ValidationError& e) {
    rethrow_with(where, e);
  }
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  if (config.trials < 0) throw ValidationError("trials must be nonnegative");
  if (config.n_min < 2 || config.n_max < config.n_min) throw ValidationError("invalid qubit range");
  if (config.threads < 1) throw ValidationError("threads must be positive");
  if (config.dense_cap < 0 || config.dense_cap > kDenseQubitCap)
    throw ValidationError("dense cap must lie in [0, " + std::to_string(kDenseQubitCap) + "]");
  if (config.trotter_steps < 1) throw ValidationError("Trotter steps must be positive");

  std::vector<std::pair<int, int>> jobs;
  for (int n = config.n_min; n <= config.n_max; ++n)
    for (int t = 0; t < config.trials; ++t) jobs.emplace_back(n, t);

  std::vector<TrialRecord> records(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        records[k] = run_trial(config, jobs[k].first, jobs[k].second).record;
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };

  const int width = std::min<int>(config.threads, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (width == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  // Report the first failure in job order so the message does not depend on scheduling.
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return records;
}

// ---------------------------------------------------------------------------

const char* const kCsvHeader =
    "trial_id,N,topology,mode,seed,t_A,exact_op_norm,bound_op_norm,exact_frob,frob_bound,"
    "expectation_bound,expectation_bound_mitigated,exact_delta_O,small_defect,short_time";

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> optional_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_double(text);
}

bool parse_flag(const std::string& text) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw ValidationError("expected 0 or 1, got '" + text + "'");
}

long long parse_integer(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("not an integer: '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument(text);
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("not an unsigned integer: '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("not an unsigned integer: '" + text + "'");
  return v;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.trial_id << ',' << r.n_qubits << ',' << to_string(r.topology) << ',' << to_string(r.mode) << ','
        << r.seed << ',' << format_double(r.t_a) << ',' << cell(r.exact_op_norm) << ','
        << format_double(r.bound_op_norm) << ',' << cell(r.exact_frob) << ',' << format_double(r.frob_bound)
        << ',' << format_double(r.expectation_bound) << ',' << format_double(r.expectation_bound_mitigated)
        << ',' << cell(r.exact_delta_o) << ',' << (r.small_defect ? 1 : 0) << ',' << (r.short_time ? 1 : 0)
        << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ValidationError("results CSV header mismatch");
  std::vector<TrialRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 15) {
      throw ValidationError("results CSV line " + std::to_string(line_no) + ": expected 15 fields, got " +
                            std::to_string(f.size()));
    }
    try {
      TrialRecord r;
      r.trial_id = static_cast<int>(parse_integer(f[0]));
      r.n_qubits = static_cast<int>(parse_integer(f[1]));
      r.topology = topology_from_string(f[2]);
      r.mode = mode_from_string(f[3]);
      r.seed = parse_unsigned(f[4]);
      r.t_a = parse_double(f[5]);
      r.exact_op_norm = optional_double(f[6]);
      r.bound_op_norm = parse_double(f[7]);
      r.exact_frob = optional_double(f[8]);
      r.frob_bound = parse_double(f[9]);
      r.expectation_bound = parse_double(f[10]);
      r.expectation_bound_mitigated = parse_double(f[11]);
      r.exact_delta_o = optional_double(f[12]);
      r.small_defect = parse_flag(f[13]);
      r.short_time = parse_flag(f[14]);
      records.push_back(r);
    } catch (const ValidationError& e) {
      throw ValidationError("results CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

// ---------------------------------------------------------------------------

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Stats describe(std::vector<double> values) {
  if (values.empty()) throw ValidationError("statistics of an empty sample");
  std::sort(values.begin(), values.end());
  Stats s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = quantile_sorted(values, 0.5);
  s.q25 = quantile_sorted(values, 0.25);
  s.q75 = quantile_sorted(values, 0.75);
  return s;
}

Summary summarize(const std::vector<TrialRecord>& records) {
  using GroupKey = std::tuple<int, TopologyKind, SynthesisMode>;
  std::map<GroupKey, std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) groups[{r.n_qubits, r.topology, r.mode}].push_back(&r);

  Summary summary;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    std::tie(row.n_qubits, row.topology, row.mode) = key;
    row.records = members.size();
    std::vector<double> exact, bound, t_a;
    for (const TrialRecord* r : members) {
      if (r->exact_op_norm) exact.push_back(*r->exact_op_norm);
      bound.push_back(r->bound_op_norm);
      t_a.push_back(r->t_a);
    }
    const std::string label = "N=" + std::to_string(row.n_qubits) + " topology=" + to_string(row.topology) +
                              " mode=" + to_string(row.mode);
    if (exact.empty()) {
      summary.warnings.push_back(label + ": no exact_op_norm values, statistics omitted");
    } else {
      if (exact.size() < members.size())
        summary.warnings.push_back(label + ": exact_op_norm missing in some records");
      row.exact_op_norm = describe(exact);
    }
    row.bound_op_norm = describe(bound);
    row.t_a = describe(t_a);
    summary.rows.push_back(row);
  }
  return summary;
}

void write_summary_csv(std::ostream& out, const Summary& summary) {
  out << "N,topology,mode,records";
  for (const char* metric : {"exact_op_norm", "bound_op_norm", "t_A"})
    for (const char* stat : {"mean", "median", "q25", "q75"}) out << ',' << metric << '_' << stat;
  out << '\n';
  auto emit = [&out](const std::optional<Stats>& s) {
    if (s) {
      out << ',' << format_double(s->mean) << ',' << format_double(s->median) << ',' << format_double(s->q25)
          << ',' << format_double(s->q75);
    } else {
      out << ",,,,";
    }
  };
  for (const SummaryRow& row : summary.rows) {
    out << row.n_qubits << ',' << to_string(row.topology) << ',' << to_string(row.mode) << ',' << row.records;
    emit(row.exact_op_norm);
    emit(row.bound_op_norm);
    emit(row.t_a);
    out << '\n';
  }
}

}  // namespace daqc
