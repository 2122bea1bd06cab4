#include "daqc/sign_blocks.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

#include "daqc/errors.hpp"
#include "daqc/rng.hpp"

namespace daqc {

char to_char(Gate g) { return "IXYZ"[static_cast<int>(g)]; }

Gate gate_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I':
      return Gate::I;
    case 'X':
      return Gate::X;
    case 'Y':
      return Gate::Y;
    case 'Z':
      return Gate::Z;
    default:
      throw ValidationError(std::string("unknown gate '") + c + "'");
  }
}

GatePattern GatePattern::identity(int n_qubits) {
  return GatePattern(std::vector<Gate>(static_cast<std::size_t>(n_qubits), Gate::I));
}

GatePattern GatePattern::from_string(const std::string& text) {
  if (text.empty()) throw ValidationError("empty gate pattern");
  std::vector<Gate> gates;
  gates.reserve(text.size());
  for (char c : text) gates.push_back(gate_from_char(c));
  return GatePattern(std::move(gates));
}

bool GatePattern::is_identity() const {
  return std::all_of(gates_.begin(), gates_.end(), [](Gate g) { return g == Gate::I; });
}

std::string GatePattern::to_string() const {
  std::string s;
  s.reserve(gates_.size());
  for (Gate g : gates_) s.push_back(to_char(g));
  return s;
}

int block_sign(const GatePattern& pattern, const CouplingKey& key) {
  if (pattern.size() <= std::max(key.i, key.j)) {
    throw ValidationError("pattern " + pattern.to_string() + " too short for " + to_string(key));
  }
  return conjugation_sign(pattern[key.i], key.mu) * conjugation_sign(pattern[key.j], key.nu);
}

SignMatrix build_sign_matrix(std::span<const GatePattern> patterns,
                             std::span<const CouplingKey> rows) {
  if (patterns.empty()) throw ValidationError("sign matrix needs at least one pattern");
  if (rows.empty()) throw ValidationError("sign matrix needs at least one row");
  std::set<GatePattern> seen;
  for (const auto& p : patterns) {
    if (!seen.insert(p).second) throw ValidationError("duplicate gate pattern " + p.to_string());
  }

  SignMatrix m;
  m.rows.assign(rows.begin(), rows.end());
  m.patterns.assign(patterns.begin(), patterns.end());
  m.entries.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(patterns.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t k = 0; k < patterns.size(); ++k)
      m.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) =
          block_sign(patterns[k], rows[a]);
  return m;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
// Up to this many patterns the whole alphabet is shuffled; above it, draws
// are rejection-sampled.
constexpr std::uint64_t kShuffleLimit = std::uint64_t{1} << 20;

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int e = 0; e < exp; ++e) {
    if (r > kSaturated / base) return kSaturated;
    r *= base;
  }
  return r;
}

GatePattern decode(std::uint64_t code, int n_qubits, bool zz_alphabet) {
  std::vector<Gate> gates(static_cast<std::size_t>(n_qubits), Gate::I);
  for (int q = 0; q < n_qubits; ++q) {
    if (zz_alphabet) {
      gates[static_cast<std::size_t>(q)] = (code & 1U) ? Gate::X : Gate::I;
      code >>= 1;
    } else {
      gates[static_cast<std::size_t>(q)] = static_cast<Gate>(code & 3U);
      code >>= 2;
    }
  }
  return GatePattern(std::move(gates));
}

}  // namespace

std::uint64_t pattern_alphabet_size(const InteractionGraph& support) {
  return saturating_pow(support.zz_only() ? 2 : 4, support.n_qubits());
}

std::vector<GatePattern> generate_candidate_patterns(const InteractionGraph& source_support,
                                                     std::uint64_t requested,
                                                     std::uint64_t rng_seed) {
  if (requested < 1) throw ValidationError("at least one pattern must be requested");
  const int n = source_support.n_qubits();
  const bool zz = source_support.zz_only();
  const std::uint64_t total = pattern_alphabet_size(source_support);
  if (requested > total) {
    throw ExhaustionError("requested " + std::to_string(requested) + " patterns but only " +
                          std::to_string(total) + " exist");
  }

  std::vector<GatePattern> out;
  out.reserve(static_cast<std::size_t>(requested));
  out.push_back(GatePattern::identity(n));
  if (requested == 1) return out;

  Rng rng(rng_seed);
  if (total <= kShuffleLimit) {
    // Lazy Fisher-Yates over codes 1..total-1; only the first `requested - 1`
    // swaps are performed, which keeps prefixes stable across requests.
    std::vector<std::uint64_t> codes(static_cast<std::size_t>(total - 1));
    std::iota(codes.begin(), codes.end(), std::uint64_t{1});
    for (std::uint64_t k = 0; k + 1 < requested; ++k) {
      const std::uint64_t pick = k + rng.below(codes.size() - k);
      std::swap(codes[k], codes[pick]);
      out.push_back(decode(codes[k], n, zz));
    }
    return out;
  }

  const int bits = zz ? n : 2 * n;
  std::unordered_set<std::uint64_t> seen{0};
  while (out.size() < requested) {
    std::uint64_t code = rng.next();
    if (bits < 64) code &= (std::uint64_t{1} << bits) - 1;
    if (seen.insert(code).second) out.push_back(decode(code, n, zz));
  }
  return out;
}

void write_patterns(std::ostream& out, std::span<const GatePattern> patterns) {
  for (const auto& p : patterns) out << p.to_string() << '\n';
}

std::vector<GatePattern> read_patterns(std::istream& in) {
  std::vector<GatePattern> out;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(GatePattern::from_string(line.substr(first, last - first + 1)));
  }
  return out;
}

void write_sign_matrix_csv(std::ostream& out, const SignMatrix& m) {
  out << "key";
  for (const auto& p : m.patterns) out << ',' << p.to_string();
  out << '\n';
  for (std::size_t a = 0; a < m.rows.size(); ++a) {
    const auto& k = m.rows[a];
    out << k.i << ' ' << k.j << ' ' << to_char(k.mu) << ' ' << to_char(k.nu);
    for (Eigen::Index c = 0; c < m.entries.cols(); ++c)
      out << ',' << m.entries(static_cast<Eigen::Index>(a), c);
    out << '\n';
  }
}

}  // namespace daqc
