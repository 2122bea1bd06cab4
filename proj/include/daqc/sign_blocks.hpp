#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "daqc/pauli_core.hpp"

namespace daqc {

/// Single-qubit gate applied around an analog block.
enum class Gate : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Gate g);
Gate gate_from_char(char c);

/// One layer of single-qubit Pauli gates, one per qubit.
class GatePattern {
 public:
  GatePattern() = default;
  explicit GatePattern(std::vector<Gate> gates) : gates_(std::move(gates)) {}

  static GatePattern identity(int n_qubits);
  /// Parses a string over {I, X, Y, Z}, e.g. "IXX".
  static GatePattern from_string(const std::string& text);

  int size() const { return static_cast<int>(gates_.size()); }
  Gate operator[](int q) const { return gates_[static_cast<std::size_t>(q)]; }
  bool is_identity() const;
  std::string to_string() const;

  auto operator<=>(const GatePattern&) const = default;

 private:
  std::vector<Gate> gates_;
};

/// Sign acquired by a single Pauli axis under conjugation by gate g:
/// +1 if g is I or the same axis, -1 otherwise.
constexpr int conjugation_sign(Gate g, PauliAxis axis) noexcept {
  if (g == Gate::I) return 1;
  return static_cast<int>(g) == static_cast<int>(axis) + 1 ? 1 : -1;
}

/// Effective sign of coupling `key` inside an analog block sandwiched by `pattern`.
int block_sign(const GatePattern& pattern, const CouplingKey& key);

/// ±1 matrix M with M(alpha, k) = block_sign(patterns[k], rows[alpha]).
struct SignMatrix {
  std::vector<CouplingKey> rows;
  std::vector<GatePattern> patterns;
  Eigen::MatrixXi entries;
};

/// Throws ValidationError on empty inputs or duplicate patterns.
SignMatrix build_sign_matrix(std::span<const GatePattern> patterns,
                             std::span<const CouplingKey> rows);

/// Number of distinct candidate patterns for a support: 2^N over {I, X} for
/// ZZ-only supports, 4^N over {I, X, Y, Z} otherwise. Saturates at UINT64_MAX.
std::uint64_t pattern_alphabet_size(const InteractionGraph& support);

/// Duplicate-free candidate list: the identity first, then seed-ordered
/// patterns. For a fixed support and seed the list for `requested` = k is a
/// prefix of the list for any larger k, so growing the request only appends.
std::vector<GatePattern> generate_candidate_patterns(const InteractionGraph& source_support,
                                                     std::uint64_t requested,
                                                     std::uint64_t rng_seed);

void write_patterns(std::ostream& out, std::span<const GatePattern> patterns);
std::vector<GatePattern> read_patterns(std::istream& in);

/// CSV: header `key,<pattern>...`, then one row per coupling key.
void write_sign_matrix_csv(std::ostream& out, const SignMatrix& m);

}  // namespace daqc
