#pragma once

// Exact dense-matrix ground truth for small systems: Hamiltonians built from
// coupling vectors, spectral norms, Hermitian exponentials, schedule replay
// and observable deviations.
//
// Basis convention: qubit 0 is the most significant bit of the basis index,
// i.e. operators are ordered sigma_0 ⊗ sigma_1 ⊗ ... ⊗ sigma_{N-1}.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "daqc/errors.hpp"
#include "daqc/pauli_core.hpp"
#include "daqc/rng.hpp"
#include "daqc/scheduler.hpp"
#include "daqc/sign_blocks.hpp"

namespace daqc {

inline constexpr int kDenseQubitCap = 10;

template <typename Scalar = double>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar = double>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct DenseHamiltonian {
  int n_qubits = 0;
  ComplexMatrix<Scalar> matrix;
  /// Set when every term is diagonal (ZZ couplings only).
  bool diagonal = false;
};

inline void check_dense_size(int n_qubits, int cap) {
  if (n_qubits < 1 || n_qubits > cap) {
    throw ValidationError("dense simulation supports 1.." + std::to_string(cap) + " qubits, got " +
                          std::to_string(n_qubits));
  }
}

/// m += coeff * (ops[0] ⊗ ops[1] ⊗ ...). Gate values double as Pauli labels.
template <typename Scalar>
void add_pauli_string(ComplexMatrix<Scalar>& m, std::span<const Gate> ops, std::complex<Scalar> coeff) {
  using C = std::complex<Scalar>;
  const int n = static_cast<int>(ops.size());
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::uint64_t flip = 0;
  for (int q = 0; q < n; ++q) {
    const Gate g = ops[static_cast<std::size_t>(q)];
    if (g == Gate::X || g == Gate::Y) flip |= std::uint64_t{1} << (n - 1 - q);
  }
  for (std::uint64_t b = 0; b < dim; ++b) {
    C phase(1);
    for (int q = 0; q < n; ++q) {
      const bool bit = (b >> (n - 1 - q)) & 1U;
      switch (ops[static_cast<std::size_t>(q)]) {
        case Gate::I:
        case Gate::X:
          break;
        case Gate::Y:
          phase *= bit ? C(0, -1) : C(0, 1);
          break;
        case Gate::Z:
          if (bit) phase = -phase;
          break;
      }
    }
    m(static_cast<Eigen::Index>(b ^ flip), static_cast<Eigen::Index>(b)) += coeff * phase;
  }
}

inline std::vector<Gate> coupling_ops(const CouplingKey& key, int n_qubits) {
  std::vector<Gate> ops(static_cast<std::size_t>(n_qubits), Gate::I);
  ops[static_cast<std::size_t>(key.i)] = static_cast<Gate>(static_cast<int>(key.mu) + 1);
  ops[static_cast<std::size_t>(key.j)] = static_cast<Gate>(static_cast<int>(key.nu) + 1);
  return ops;
}

/// Diagonal of a ZZ-only Hamiltonian: sum_alpha h_alpha s_i(b) s_j(b).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> zz_energies(const CouplingVector& h, std::span<const int> signs = {}) {
  const int n = h.n_qubits();
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(dim));
  std::size_t idx = 0;
  for (const auto& [key, value] : h) {
    const Scalar c = Scalar(value) * Scalar(signs.empty() ? 1 : signs[idx]);
    ++idx;
    if (c == Scalar(0)) continue;
    const int si = n - 1 - key.i;
    const int sj = n - 1 - key.j;
    for (std::uint64_t b = 0; b < dim; ++b) {
      const bool odd = ((b >> si) ^ (b >> sj)) & 1U;
      e(static_cast<Eigen::Index>(b)) += odd ? -c : c;
    }
  }
  return e;
}

inline bool zz_only(const CouplingVector& h) {
  return std::all_of(h.begin(), h.end(), [](const auto& kv) {
    return kv.second == 0.0 || (kv.first.mu == PauliAxis::Z && kv.first.nu == PauliAxis::Z);
  });
}

/// H = sum_alpha h_alpha sigma_i^mu sigma_j^nu as a dense 2^N x 2^N matrix.
template <typename Scalar = double>
DenseHamiltonian<Scalar> build_dense(const CouplingVector& h, int cap = kDenseQubitCap) {
  check_dense_size(h.n_qubits(), cap);
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
  DenseHamiltonian<Scalar> out;
  out.n_qubits = h.n_qubits();
  out.diagonal = zz_only(h);
  if (out.diagonal) {
    out.matrix = zz_energies<Scalar>(h).template cast<std::complex<Scalar>>().asDiagonal();
    return out;
  }
  out.matrix = ComplexMatrix<Scalar>::Zero(dim, dim);
  for (const auto& [key, value] : h) {
    if (value == 0.0) continue;
    const std::vector<Gate> ops = coupling_ops(key, h.n_qubits());
    add_pauli_string<Scalar>(out.matrix, ops, std::complex<Scalar>(Scalar(value), 0));
  }
  return out;
}

template <typename Scalar>
Scalar hermiticity_defect(const ComplexMatrix<Scalar>& m) {
  if (m.size() == 0) return Scalar(0);
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
void require_hermitian(const ComplexMatrix<Scalar>& m, Scalar tol = Scalar(1e-12)) {
  if (m.rows() != m.cols()) throw ValidationError("matrix is not square");
  const Scalar scale = std::max(Scalar(1), m.size() ? Scalar(m.cwiseAbs().maxCoeff()) : Scalar(0));
  if (hermiticity_defect(m) > tol * scale) throw ValidationError("matrix is not Hermitian");
}

template <typename Scalar>
bool is_diagonal(const ComplexMatrix<Scalar>& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && m(r, c) != std::complex<Scalar>(0)) return false;
  return true;
}

/// Largest |eigenvalue| of a Hermitian matrix.
template <typename Scalar>
Scalar hermitian_operator_norm(const ComplexMatrix<Scalar>& m) {
  require_hermitian<Scalar>(m);
  if (m.size() == 0) return Scalar(0);
  if (is_diagonal(m)) return m.diagonal().cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver failed");
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

template <typename Scalar>
Scalar operator_norm(const DenseHamiltonian<Scalar>& h) {
  if (h.diagonal) {
    require_hermitian<Scalar>(h.matrix);
    return h.matrix.diagonal().cwiseAbs().maxCoeff();
  }
  return hermitian_operator_norm<Scalar>(h.matrix);
}

template <typename Scalar>
Scalar frobenius_norm(const DenseHamiltonian<Scalar>& h) {
  return h.matrix.norm();
}

/// exp(-i t H) for Hermitian H, via eigendecomposition.
template <typename Scalar>
ComplexMatrix<Scalar> hermitian_evolution(const ComplexMatrix<Scalar>& h, Scalar t) {
  using C = std::complex<Scalar>;
  require_hermitian<Scalar>(h);
  if (is_diagonal(h)) {
    ComplexVector<Scalar> d(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) d(k) = std::exp(C(0, -t * h(k, k).real()));
    return d.asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(h);
  if (es.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver failed");
  ComplexVector<Scalar> phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(C(0, -t * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Largest singular value of a - b.
template <typename Scalar>
Scalar operator_distance(const ComplexMatrix<Scalar>& a, const ComplexMatrix<Scalar>& b) {
  const ComplexMatrix<Scalar> d = a - b;
  if (d.size() == 0) return Scalar(0);
  if (is_diagonal(d)) return d.diagonal().cwiseAbs().maxCoeff();
  Eigen::BDCSVD<ComplexMatrix<Scalar>> svd(d);
  return svd.singularValues()(0);
}

template <typename Scalar>
Scalar unitarity_defect(const ComplexMatrix<Scalar>& u) {
  const ComplexMatrix<Scalar> g = u.adjoint() * u - ComplexMatrix<Scalar>::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

/// exp(-i T H_P): the ideal evolution.
template <typename Scalar = double>
ComplexMatrix<Scalar> ideal_unitary(const CouplingVector& h_problem, double target_time,
                                    int cap = kDenseQubitCap) {
  return hermitian_evolution<Scalar>(build_dense<Scalar>(h_problem, cap).matrix, Scalar(target_time));
}

/// Hamiltonian of analog block k: h_real with every coupling's block sign applied.
inline CouplingVector block_couplings(const GatePattern& pattern, const CouplingVector& h_real) {
  CouplingVector out(h_real.n_qubits());
  for (const auto& [key, value] : h_real) out.set(key, block_sign(pattern, key) * value);
  return out;
}

/// Unitary implemented by running the schedule on h_real.
///
/// q = 1 is the exact block product prod_k exp(-i t_k H^(k)). For q > 1 each
/// block time is divided by q and the whole sequence is repeated q times.
template <typename Scalar = double>
ComplexMatrix<Scalar> replay_unitary(const Schedule& schedule, const CouplingVector& h_real, int q = 1,
                                     int cap = kDenseQubitCap) {
  using C = std::complex<Scalar>;
  if (q < 1) throw ValidationError("Trotter step count must be positive");
  if (h_real.n_qubits() != schedule.n_qubits) throw ValidationError("qubit count mismatch");
  check_dense_size(schedule.n_qubits, cap);
  const Eigen::Index dim = Eigen::Index{1} << schedule.n_qubits;

  if (zz_only(h_real)) {
    // All blocks commute; accumulate phases.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phase = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dim);
    for (std::size_t k = 0; k < schedule.blocks(); ++k) {
      std::vector<int> signs;
      for (const auto& kv : h_real) signs.push_back(block_sign(schedule.patterns[k], kv.first));
      phase += Scalar(schedule.times(static_cast<Eigen::Index>(k))) * zz_energies<Scalar>(h_real, signs);
    }
    ComplexVector<Scalar> d(dim);
    for (Eigen::Index b = 0; b < dim; ++b) d(b) = std::exp(C(0, -phase(b)));
    return d.asDiagonal();
  }

  ComplexMatrix<Scalar> step = ComplexMatrix<Scalar>::Identity(dim, dim);
  for (std::size_t k = 0; k < schedule.blocks(); ++k) {
    const auto block = build_dense<Scalar>(block_couplings(schedule.patterns[k], h_real), cap);
    const Scalar t = Scalar(schedule.times(static_cast<Eigen::Index>(k))) / Scalar(q);
    step = (hermitian_evolution<Scalar>(block.matrix, t) * step).eval();
  }
  ComplexMatrix<Scalar> u = ComplexMatrix<Scalar>::Identity(dim, dim);
  for (int r = 0; r < q; ++r) u = (step * u).eval();
  return u;
}

// ---------------------------------------------------------------------------
// Observables and states

struct PauliTerm {
  std::string ops;  // one of I/X/Y/Z per qubit
  double weight = 1.0;
};

template <typename Scalar = double>
struct ObservableSpec {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;
  std::set<int> support;
  ComplexMatrix<Scalar> matrix;
  Scalar op_norm = 0;
};

template <typename Scalar = double>
ObservableSpec<Scalar> make_observable(int n_qubits, std::vector<PauliTerm> terms, int cap = kDenseQubitCap) {
  check_dense_size(n_qubits, cap);
  ObservableSpec<Scalar> o;
  o.n_qubits = n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  o.matrix = ComplexMatrix<Scalar>::Zero(dim, dim);
  for (const auto& term : terms) {
    const GatePattern ops = GatePattern::from_string(term.ops);
    if (ops.size() != n_qubits) throw ValidationError("Pauli string length must equal qubit count");
    std::vector<Gate> g;
    for (int q = 0; q < n_qubits; ++q) {
      g.push_back(ops[q]);
      if (ops[q] != Gate::I) o.support.insert(q);
    }
    add_pauli_string<Scalar>(o.matrix, g, std::complex<Scalar>(Scalar(term.weight), 0));
  }
  o.terms = std::move(terms);
  o.op_norm = hermitian_operator_norm<Scalar>(o.matrix);
  return o;
}

template <typename Scalar = double>
ObservableSpec<Scalar> single_qubit_observable(int n_qubits, int qubit, PauliAxis axis,
                                               int cap = kDenseQubitCap) {
  if (qubit < 0 || qubit >= n_qubits) throw ValidationError("observable qubit out of range");
  std::string ops(static_cast<std::size_t>(n_qubits), 'I');
  ops[static_cast<std::size_t>(qubit)] = static_cast<char>(std::toupper(to_char(axis)));
  return make_observable<Scalar>(n_qubits, {PauliTerm{ops, 1.0}}, cap);
}

enum class InitialState { AllZero, AllPlus, HaarProduct };

inline std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::AllZero:
      return "zero";
    case InitialState::AllPlus:
      return "plus";
    case InitialState::HaarProduct:
      return "haar";
  }
  return "?";
}

inline InitialState initial_state_from_string(const std::string& text) {
  if (text == "zero") return InitialState::AllZero;
  if (text == "plus") return InitialState::AllPlus;
  if (text == "haar") return InitialState::HaarProduct;
  throw ValidationError("unknown initial state '" + text + "' (zero|plus|haar)");
}

/// |psi_0> ⊗ ... ⊗ |psi_{N-1}> for the built-in product states.
template <typename Scalar = double>
ComplexVector<Scalar> product_state(int n_qubits, InitialState kind, std::uint64_t seed = 0,
                                    int cap = kDenseQubitCap) {
  using C = std::complex<Scalar>;
  check_dense_size(n_qubits, cap);
  Rng rng(seed);
  ComplexVector<Scalar> psi(1);
  psi(0) = C(1);
  for (int q = 0; q < n_qubits; ++q) {
    ComplexVector<Scalar> local(2);
    switch (kind) {
      case InitialState::AllZero:
        local << C(1), C(0);
        break;
      case InitialState::AllPlus:
        local << C(1 / std::sqrt(Scalar(2))), C(1 / std::sqrt(Scalar(2)));
        break;
      case InitialState::HaarProduct:
        local << C(Scalar(rng.normal()), Scalar(rng.normal())), C(Scalar(rng.normal()), Scalar(rng.normal()));
        local.normalize();
        break;
    }
    ComplexVector<Scalar> next(psi.size() * 2);
    for (Eigen::Index a = 0; a < psi.size(); ++a) {
      next(2 * a) = psi(a) * local(0);
      next(2 * a + 1) = psi(a) * local(1);
    }
    psi = std::move(next);
  }
  return psi;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> product_density(int n_qubits, InitialState kind, std::uint64_t seed = 0,
                                      int cap = kDenseQubitCap) {
  const ComplexVector<Scalar> psi = product_state<Scalar>(n_qubits, kind, seed, cap);
  return psi * psi.adjoint();
}

/// Throws ValidationError unless rho is Hermitian, unit-trace and PSD (1e-10).
template <typename Scalar>
void validate_density(const ComplexMatrix<Scalar>& rho) {
  require_hermitian<Scalar>(rho, Scalar(1e-10));
  if (std::abs(rho.trace() - std::complex<Scalar>(1)) > Scalar(1e-10)) {
    throw ValidationError("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < Scalar(-1e-10)) throw ValidationError("density matrix has a negative eigenvalue");
}

template <typename Scalar>
Scalar expectation(const ComplexMatrix<Scalar>& observable, const ComplexMatrix<Scalar>& rho) {
  return (observable * rho).trace().real();
}

/// |Tr(O rho) - Tr(O rho')| between exp(-i T H_P) and the schedule replayed on h_real.
template <typename Scalar = double>
Scalar expectation_deviation(const CouplingVector& h_problem, const Schedule& schedule,
                             const CouplingVector& h_real, const ComplexMatrix<Scalar>& rho0,
                             const ObservableSpec<Scalar>& observable, double target_time, int q = 1,
                             int cap = kDenseQubitCap) {
  validate_density<Scalar>(rho0);
  const Eigen::Index dim = Eigen::Index{1} << h_problem.n_qubits();
  if (rho0.rows() != dim || observable.matrix.rows() != dim) throw ValidationError("dimension mismatch");
  const ComplexMatrix<Scalar> u = ideal_unitary<Scalar>(h_problem, target_time, cap);
  const ComplexMatrix<Scalar> v = replay_unitary<Scalar>(schedule, h_real, q, cap);
  const ComplexMatrix<Scalar> rho = u * rho0 * u.adjoint();
  const ComplexMatrix<Scalar> rho_faulty = v * rho0 * v.adjoint();
  return std::abs(expectation<Scalar>(observable.matrix, rho) - expectation<Scalar>(observable.matrix, rho_faulty));
}

/// ||[H, O]||_op for Hermitian H and O.
template <typename Scalar>
Scalar commutator_norm(const ComplexMatrix<Scalar>& h, const ComplexMatrix<Scalar>& o) {
  const ComplexMatrix<Scalar> c = std::complex<Scalar>(0, 1) * (h * o - o * h);
  return hermitian_operator_norm<Scalar>(c);
}

}  // namespace daqc
