#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace daqc {

/// Pauli axis label. The enumerator order is the canonical x < y < z order.
enum class PauliAxis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr PauliAxis kAllAxes[] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

char to_char(PauliAxis axis);
PauliAxis axis_from_char(char c);

/// Two-body coupling label (i, j, mu, nu) with i < j.
///
/// Comparison is lexicographic on (i, j, mu, nu), which is the canonical
/// vectorization order of couplings.
struct CouplingKey {
  int i = 0;
  int j = 1;
  PauliAxis mu = PauliAxis::Z;
  PauliAxis nu = PauliAxis::Z;

  auto operator<=>(const CouplingKey&) const = default;

  /// Orients an unordered pair so that i < j, swapping the axes with it.
  static CouplingKey canonical(int a, int b, PauliAxis mu_a, PauliAxis nu_b);
  static CouplingKey zz(int a, int b) { return canonical(a, b, PauliAxis::Z, PauliAxis::Z); }

  bool touches(int v) const { return i == v || j == v; }
};

std::string to_string(const CouplingKey& key);

/// Throws ValidationError unless 0 <= i < j < n_qubits.
void validate_key(const CouplingKey& key, int n_qubits);

/// Every (i, j, mu, nu) for n qubits, in canonical order.
std::vector<CouplingKey> full_universe(int n_qubits);

/// Position of `key` in `universe`. Throws LookupError if absent.
std::size_t canonical_index(const CouplingKey& key, std::span<const CouplingKey> universe);

/// Vectorized two-body Hamiltonian.
///
/// Entries are stored in canonical key order. A key that is present with value
/// 0 is part of the declared support; an absent key is an implicit zero.
class CouplingVector {
 public:
  using Map = std::map<CouplingKey, double>;
  using const_iterator = Map::const_iterator;

  CouplingVector() = default;
  explicit CouplingVector(int n_qubits);
  CouplingVector(int n_qubits, std::initializer_list<std::pair<const CouplingKey, double>> entries);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Value at `key`, 0 when absent.
  double operator[](const CouplingKey& key) const;
  bool contains(const CouplingKey& key) const { return entries_.count(key) != 0; }

  void set(const CouplingKey& key, double value);
  void erase(const CouplingKey& key) { entries_.erase(key); }

  const Map& entries() const { return entries_; }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  std::vector<CouplingKey> keys() const;
  std::vector<double> values() const;

  /// Copy restricted to the given keys (absent keys are skipped).
  CouplingVector restricted_to(const std::set<CouplingKey>& keys) const;

  bool operator==(const CouplingVector&) const = default;

 private:
  int n_qubits_ = 0;
  Map entries_;
};

CouplingVector operator+(const CouplingVector& a, const CouplingVector& b);
CouplingVector operator-(const CouplingVector& a, const CouplingVector& b);
CouplingVector operator*(double s, const CouplingVector& v);

/// Elementwise product over the union of declared keys.
CouplingVector hadamard_multiply(const CouplingVector& a, const CouplingVector& b);

enum class IndeterminatePolicy { Error, Zero, Skip };

/// Elementwise a / b over keys(a) ∪ keys(b).
///
/// 0/0 is resolved by `policy`; nonzero/0 always throws SimulabilityError.
CouplingVector hadamard_divide(const CouplingVector& a, const CouplingVector& b,
                               IndeterminatePolicy policy);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Vector p-norm over the declared entries. p = +inf is the max |v|,
/// p = -inf the min |v| (not a norm, but used as one in the bounds).
double vector_p_norm(std::span<const double> values, double p);
double vector_p_norm(const CouplingVector& v, double p);

/// Weighted multigraph: one edge per (i, j, mu, nu).
class InteractionGraph {
 public:
  InteractionGraph() = default;
  explicit InteractionGraph(int n_qubits);
  InteractionGraph(int n_qubits, std::set<CouplingKey> edges);

  int n_qubits() const { return n_qubits_; }
  const std::set<CouplingKey>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(const CouplingKey& key) const { return edges_.count(key) != 0; }
  bool empty() const { return edges_.empty(); }

  void add(const CouplingKey& key);

  /// Multigraph degree of vertex v.
  int vertex_degree(int v) const;
  bool is_subgraph_of(const InteractionGraph& other) const;
  /// True when every edge is a ZZ coupling.
  bool zz_only() const;

  bool operator==(const InteractionGraph&) const = default;

 private:
  int n_qubits_ = 0;
  std::set<CouplingKey> edges_;
};

/// Keys with nonzero coupling.
InteractionGraph support_graph(const CouplingVector& v);
/// Every declared key, zero or not.
InteractionGraph declared_graph(const CouplingVector& v);

InteractionGraph graph_difference(const InteractionGraph& d, const InteractionGraph& s);
InteractionGraph graph_union(const InteractionGraph& a, const InteractionGraph& b);

/// Max multigraph degree over vertices.
int degree(const InteractionGraph& g);

// Plain-text coupling records: header `n_qubits=<N>`, then `i j mu nu value`
// lines. `#` starts a comment. A line without a value declares the key with
// coupling 0.
void write_couplings(std::ostream& out, const CouplingVector& v);
CouplingVector read_couplings(std::istream& in);
CouplingVector load_couplings(const std::string& path);
void save_couplings(const std::string& path, const CouplingVector& v);

/// %.17g formatting; round-trips doubles exactly.
std::string format_double(double x);
double parse_double(const std::string& text);

}  // namespace daqc
