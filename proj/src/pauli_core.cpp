#include "daqc/pauli_core.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "daqc/errors.hpp"

namespace daqc {

char to_char(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::X:
      return 'x';
    case PauliAxis::Y:
      return 'y';
    case PauliAxis::Z:
      return 'z';
  }
  return '?';
}

PauliAxis axis_from_char(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'x':
      return PauliAxis::X;
    case 'y':
      return PauliAxis::Y;
    case 'z':
      return PauliAxis::Z;
    default:
      throw ValidationError(std::string("unknown Pauli axis '") + c + "'");
  }
}

CouplingKey CouplingKey::canonical(int a, int b, PauliAxis mu_a, PauliAxis nu_b) {
  if (a == b) throw ValidationError("coupling endpoints must differ");
  if (a < b) return CouplingKey{a, b, mu_a, nu_b};
  return CouplingKey{b, a, nu_b, mu_a};
}

std::string to_string(const CouplingKey& key) {
  std::ostringstream os;
  os << '(' << key.i << ',' << key.j << ',' << to_char(key.mu) << ',' << to_char(key.nu) << ')';
  return os.str();
}

void validate_key(const CouplingKey& key, int n_qubits) {
  if (!(0 <= key.i && key.i < key.j && key.j < n_qubits)) {
    throw ValidationError("coupling " + to_string(key) + " invalid for " +
                          std::to_string(n_qubits) + " qubits");
  }
}

std::vector<CouplingKey> full_universe(int n_qubits) {
  std::vector<CouplingKey> keys;
  for (int i = 0; i < n_qubits; ++i)
    for (int j = i + 1; j < n_qubits; ++j)
      for (PauliAxis mu : kAllAxes)
        for (PauliAxis nu : kAllAxes) keys.push_back({i, j, mu, nu});
  return keys;
}

std::size_t canonical_index(const CouplingKey& key, std::span<const CouplingKey> universe) {
  const auto it = std::find(universe.begin(), universe.end(), key);
  if (it == universe.end()) throw LookupError("coupling " + to_string(key) + " not in universe");
  return static_cast<std::size_t>(it - universe.begin());
}

// ---------------------------------------------------------------------------

CouplingVector::CouplingVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw ValidationError("n_qubits must be positive");
}

CouplingVector::CouplingVector(int n_qubits,
                               std::initializer_list<std::pair<const CouplingKey, double>> entries)
    : CouplingVector(n_qubits) {
  for (const auto& [key, value] : entries) set(key, value);
}

double CouplingVector::operator[](const CouplingKey& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

void CouplingVector::set(const CouplingKey& key, double value) {
  validate_key(key, n_qubits_);
  if (!std::isfinite(value)) throw ValidationError("non-finite coupling at " + to_string(key));
  entries_[key] = value;
}

std::vector<CouplingKey> CouplingVector::keys() const {
  std::vector<CouplingKey> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

std::vector<double> CouplingVector::values() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.second);
  return out;
}

CouplingVector CouplingVector::restricted_to(const std::set<CouplingKey>& keys) const {
  CouplingVector out(n_qubits_);
  for (const auto& [key, value] : entries_)
    if (keys.count(key)) out.entries_.emplace(key, value);
  return out;
}

namespace {

void require_same_size(int a, int b) {
  if (a != b) {
    throw ValidationError("qubit count mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
}

template <typename Op>
CouplingVector combine(const CouplingVector& a, const CouplingVector& b, Op op) {
  require_same_size(a.n_qubits(), b.n_qubits());
  CouplingVector out(a.n_qubits());
  for (const auto& [key, value] : a) out.set(key, op(value, b[key]));
  for (const auto& [key, value] : b)
    if (!a.contains(key)) out.set(key, op(0.0, value));
  return out;
}

}  // namespace

CouplingVector operator+(const CouplingVector& a, const CouplingVector& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

CouplingVector operator-(const CouplingVector& a, const CouplingVector& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

CouplingVector operator*(double s, const CouplingVector& v) {
  CouplingVector out(v.n_qubits());
  for (const auto& [key, value] : v) out.set(key, s * value);
  return out;
}

CouplingVector hadamard_multiply(const CouplingVector& a, const CouplingVector& b) {
  return combine(a, b, [](double x, double y) { return x * y; });
}

CouplingVector hadamard_divide(const CouplingVector& a, const CouplingVector& b,
                               IndeterminatePolicy policy) {
  require_same_size(a.n_qubits(), b.n_qubits());
  std::set<CouplingKey> keys;
  for (const auto& kv : a) keys.insert(kv.first);
  for (const auto& kv : b) keys.insert(kv.first);

  CouplingVector out(a.n_qubits());
  for (const CouplingKey& key : keys) {
    const double num = a[key];
    const double den = b[key];
    if (den != 0.0) {
      out.set(key, num / den);
      continue;
    }
    if (num != 0.0) {
      throw SimulabilityError("coupling " + to_string(key) +
                              " is nonzero in the numerator but absent from the denominator");
    }
    switch (policy) {
      case IndeterminatePolicy::Zero:
        out.set(key, 0.0);
        break;
      case IndeterminatePolicy::Skip:
        break;
      case IndeterminatePolicy::Error:
        throw ValidationError("indeterminate 0/0 at " + to_string(key));
    }
  }
  return out;
}

double vector_p_norm(std::span<const double> values, double p) {
  if (std::isnan(p) || p == 0.0) throw ValidationError("norm order must be nonzero");
  if (p == -kInfNorm) {
    if (values.empty()) throw ValidationError("-inf norm undefined on an empty vector");
    double m = kInfNorm;
    for (double v : values) m = std::min(m, std::abs(v));
    return m;
  }
  if (p == kInfNorm) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 0.0) throw ValidationError("negative finite norm orders are not supported");
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  // Scale by the max entry so large p does not overflow.
  const double scale = vector_p_norm(values, kInfNorm);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

double vector_p_norm(const CouplingVector& v, double p) {
  const std::vector<double> values = v.values();
  return vector_p_norm(std::span<const double>(values), p);
}

// ---------------------------------------------------------------------------

InteractionGraph::InteractionGraph(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw ValidationError("n_qubits must be positive");
}

InteractionGraph::InteractionGraph(int n_qubits, std::set<CouplingKey> edges)
    : InteractionGraph(n_qubits) {
  for (const auto& key : edges) validate_key(key, n_qubits);
  edges_ = std::move(edges);
}

void InteractionGraph::add(const CouplingKey& key) {
  validate_key(key, n_qubits_);
  edges_.insert(key);
}

int InteractionGraph::vertex_degree(int v) const {
  return static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [v](const CouplingKey& k) { return k.touches(v); }));
}

bool InteractionGraph::is_subgraph_of(const InteractionGraph& other) const {
  return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

bool InteractionGraph::zz_only() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const CouplingKey& k) {
    return k.mu == PauliAxis::Z && k.nu == PauliAxis::Z;
  });
}

InteractionGraph support_graph(const CouplingVector& v) {
  InteractionGraph g(v.n_qubits());
  for (const auto& [key, value] : v)
    if (value != 0.0) g.add(key);
  return g;
}

InteractionGraph declared_graph(const CouplingVector& v) {
  InteractionGraph g(v.n_qubits());
  for (const auto& kv : v) g.add(kv.first);
  return g;
}

InteractionGraph graph_difference(const InteractionGraph& d, const InteractionGraph& s) {
  require_same_size(d.n_qubits(), s.n_qubits());
  std::set<CouplingKey> edges;
  std::set_difference(d.edges().begin(), d.edges().end(), s.edges().begin(), s.edges().end(),
                      std::inserter(edges, edges.end()));
  return InteractionGraph(d.n_qubits(), std::move(edges));
}

InteractionGraph graph_union(const InteractionGraph& a, const InteractionGraph& b) {
  require_same_size(a.n_qubits(), b.n_qubits());
  std::set<CouplingKey> edges = a.edges();
  edges.insert(b.edges().begin(), b.edges().end());
  return InteractionGraph(a.n_qubits(), std::move(edges));
}

int degree(const InteractionGraph& g) {
  std::vector<int> per_vertex(static_cast<std::size_t>(g.n_qubits()), 0);
  for (const auto& key : g.edges()) {
    ++per_vertex[static_cast<std::size_t>(key.i)];
    ++per_vertex[static_cast<std::size_t>(key.j)];
  }
  return per_vertex.empty() ? 0 : *std::max_element(per_vertex.begin(), per_vertex.end());
}

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError("not a number: '" + text + "'");
  }
  return v;
}

void write_couplings(std::ostream& out, const CouplingVector& v) {
  out << "n_qubits=" << v.n_qubits() << '\n';
  for (const auto& [key, value] : v) {
    out << key.i << ' ' << key.j << ' ' << to_char(key.mu) << ' ' << to_char(key.nu) << ' '
        << format_double(value) << '\n';
  }
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError("not an integer: '" + text + "'");
  return v;
}

}  // namespace

CouplingVector read_couplings(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<CouplingVector> result;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip_comment(line);
    if (s.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!result) {
      if (s.rfind("n_qubits=", 0) != 0) throw ValidationError(where + "expected n_qubits=<N> header");
      result.emplace(parse_int(s.substr(9)));
      continue;
    }
    std::istringstream fields(s);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.size() != 4 && tok.size() != 5) throw ValidationError(where + "expected 'i j mu nu [value]'");
    if (tok[2].size() != 1 || tok[3].size() != 1) throw ValidationError(where + "axis must be x, y or z");
    const int i = parse_int(tok[0]);
    const int j = parse_int(tok[1]);
    const CouplingKey key = CouplingKey::canonical(i, j, axis_from_char(tok[2][0]), axis_from_char(tok[3][0]));
    if (result->contains(key)) throw ValidationError(where + "duplicate coupling " + to_string(key));
    result->set(key, tok.size() == 5 ? parse_double(tok[4]) : 0.0);
  }
  if (!result) throw ValidationError("missing n_qubits header");
  return *result;
}

CouplingVector load_couplings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_couplings(in);
}

void save_couplings(const std::string& path, const CouplingVector& v) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  write_couplings(out, v);
}

}  // namespace daqc
