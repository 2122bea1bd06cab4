#include <doctest.h>

#include <cmath>

#include "daqc/dense_sim.hpp"
#include "daqc/errors.hpp"
#include "daqc/scheduler.hpp"
#include "oracles.hpp"

using namespace daqc;

namespace {

const CouplingKey k01 = CouplingKey::zz(0, 1);

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("dense builder matches explicit Kronecker products") {
  Rng rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const CouplingVector h = oracle::random_couplings(rng, n, trial % 3 == 0, 0.4);
    const auto dense = build_dense(h);
    CHECK(max_abs(dense.matrix - oracle::dense(h)) <= 1e-12);
    CHECK(dense.diagonal == (trial % 3 == 0));
  }
}

TEST_CASE("dense builder examples") {
  const auto zz = build_dense(CouplingVector(2, {{k01, 1.0}}));
  Eigen::VectorXcd expected(4);
  expected << 1, -1, -1, 1;
  CHECK(max_abs(zz.matrix - Eigen::MatrixXcd(expected.asDiagonal())) == 0.0);

  CHECK(max_abs(build_dense(CouplingVector(3)).matrix) == 0.0);

  const CouplingVector tri(3, {{k01, 1.0}, {CouplingKey::zz(0, 2), 1.0}, {CouplingKey::zz(1, 2), 1.0}});
  const auto t = build_dense(tri);
  CHECK(t.diagonal);
  CHECK(t.matrix.diagonal().cwiseAbs().maxCoeff() == doctest::Approx(3.0));
  CHECK(operator_norm(t) == doctest::Approx(3.0));

  CHECK_THROWS_AS(build_dense(CouplingVector(11)), ValidationError);
  CHECK_THROWS_AS(build_dense(CouplingVector(5), 4), ValidationError);
}

TEST_CASE("operator norm") {
  for (PauliAxis mu : kAllAxes) {
    const CouplingVector h(3, {{CouplingKey{0, 2, mu, PauliAxis::Y}, -2.5}});
    CHECK(operator_norm(build_dense(h)) == doctest::Approx(2.5).epsilon(1e-14));
  }
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const CouplingVector zz = oracle::random_couplings(rng, 4, true);
    auto d = build_dense(zz);
    const double fast = operator_norm(d);
    d.diagonal = false;
    CHECK(std::abs(fast - hermitian_operator_norm(Eigen::MatrixXcd(d.matrix))) <= 1e-10);
    d.matrix(0, 1) = d.matrix(1, 0) = 1e-3;  // defeat the diagonal shortcut
    CHECK(std::abs(hermitian_operator_norm(Eigen::MatrixXcd(d.matrix)) - oracle::hermitian_norm(d.matrix)) <=
          1e-8);
  }
  for (int trial = 0; trial < 30; ++trial) {
    const CouplingVector h = oracle::random_couplings(rng, 3, false, 0.5);
    CHECK(std::abs(operator_norm(build_dense(h)) - oracle::hermitian_norm(oracle::dense(h))) <= 1e-8);
  }
  Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Zero(2, 2);
  not_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_operator_norm(not_hermitian), ValidationError);
}

TEST_CASE("operator norm never exceeds the coupling 1-norm") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const CouplingVector h = oracle::random_couplings(rng, n, trial % 2 == 0, 0.3);
    CHECK(operator_norm(build_dense(h)) <= vector_p_norm(h, 1.0) * (1 + 1e-12));
  }
}

TEST_CASE("Frobenius norm equals 2^(N/2) times the coupling 2-norm") {
  CHECK(frobenius_norm(build_dense(CouplingVector(4, {{k01, -1.5}}))) == doctest::Approx(1.5 * 4.0));
  CHECK(frobenius_norm(build_dense(CouplingVector(3))) == 0.0);
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const CouplingVector h = oracle::random_couplings(rng, n, trial % 2 == 0, 0.5);
    const double expected = std::pow(2.0, 0.5 * n) * vector_p_norm(h, 2.0);
    const double trace = std::sqrt((oracle::dense(h).adjoint() * oracle::dense(h)).trace().real());
    CHECK(std::abs(frobenius_norm(build_dense(h)) - expected) <= 1e-10 * expected);
    CHECK(std::abs(trace - expected) <= 1e-10 * expected);
  }
}

TEST_CASE("Hermitian evolution agrees with a Taylor-series exponential") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CouplingVector h = oracle::random_couplings(rng, 3, trial % 2 == 0, 0.5);
    const double t = rng.uniform(0.0, 2.0);
    const Eigen::MatrixXcd u = hermitian_evolution(build_dense(h).matrix, t);
    CHECK(operator_distance(u, oracle::expm_minus_i(oracle::dense(h), t)) <= 1e-10);
    CHECK(unitarity_defect(u) <= 1e-10);
  }
}

TEST_CASE("replaying a ZZ schedule on the source is exact") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const auto pair = oracle::random_pair(rng, oracle::zz_complete(n));
    const double t = rng.uniform(0.2, 2.0);
    const Schedule s = synthesize(pair.h_problem, pair.h_source, support_graph(pair.h_source), t,
                                  SynthesisMode::RemoveZeros, trial);
    const auto replay = replay_unitary(s, pair.h_source);
    CHECK(operator_distance(replay, ideal_unitary(pair.h_problem, t)) <= 1e-10);
    CHECK(unitarity_defect(replay) <= 1e-10);
  }
}

TEST_CASE("zero-time schedules replay to the identity") {
  Schedule s;
  s.n_qubits = 3;
  s.patterns = {GatePattern::from_string("IXY"), GatePattern::from_string("ZZI")};
  s.times = Eigen::VectorXd::Zero(2);
  const CouplingVector h(3, {{CouplingKey{0, 1, PauliAxis::X, PauliAxis::Y}, 1.0}, {k01, 2.0}});
  CHECK(max_abs(replay_unitary(s, h) - Eigen::MatrixXcd::Identity(8, 8)) <= 1e-14);
}

TEST_CASE("Trotter refinement shrinks the error for non-commuting sources") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const CouplingVector h_s = oracle::random_couplings(rng, 3, false, 0.3, 0.5, 1.5);
    CouplingVector h_p(3);
    for (const auto& [key, value] : h_s) h_p.set(key, rng.uniform(-1.5, 1.5));
    const Schedule s = synthesize(h_p, h_s, support_graph(h_s), 1.0, SynthesisMode::RemoveZeros, trial);
    if (s.blocks() < 2) continue;
    const auto target = ideal_unitary(h_p, 1.0);
    double previous = std::numeric_limits<double>::infinity();
    for (int q : {1, 2, 4, 8}) {
      const auto u = replay_unitary(s, h_s, q);
      CHECK(unitarity_defect(u) <= 1e-10);
      const double err = operator_distance(u, target);
      CHECK(err < previous);
      previous = err;
    }
  }
}

TEST_CASE("product states") {
  for (auto kind : {InitialState::AllZero, InitialState::AllPlus, InitialState::HaarProduct}) {
    const auto rho = product_density(4, kind, 9);
    CHECK_NOTHROW(validate_density(rho));
    CHECK(initial_state_from_string(to_string(kind)) == kind);
  }
  const auto zero = product_state(2, InitialState::AllZero);
  CHECK(std::abs(zero(0) - 1.0) == 0.0);
  const auto plus = product_state(2, InitialState::AllPlus);
  for (Eigen::Index b = 0; b < 4; ++b) CHECK(std::abs(plus(b) - 0.5) <= 1e-15);
  CHECK(max_abs(product_state(3, InitialState::HaarProduct, 5) - product_state(3, InitialState::HaarProduct, 5)) ==
        0.0);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(validate_density(bad), ValidationError);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(validate_density(bad), ValidationError);
  CHECK_THROWS_AS(initial_state_from_string("mixed"), ValidationError);
}

TEST_CASE("single-qubit observables") {
  const auto x1 = single_qubit_observable(3, 1, PauliAxis::X);
  std::vector<char> ops{'I', 'X', 'I'};
  CHECK(max_abs(x1.matrix - oracle::pauli_string(ops)) == 0.0);
  CHECK(x1.support == std::set<int>{1});
  CHECK(x1.op_norm == doctest::Approx(1.0));
  CHECK_THROWS_AS(single_qubit_observable(3, 3, PauliAxis::X), ValidationError);
  const auto two = make_observable(2, {PauliTerm{"XI", 1.0}, PauliTerm{"IZ", 2.0}});
  CHECK(two.support == std::set<int>{0, 1});
  CHECK(two.op_norm == doctest::Approx(3.0));
}

TEST_CASE("expectation deviations") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const auto pair = oracle::random_pair(rng, oracle::zz_chain(n), 1.0);
    const Schedule s = synthesize(pair.h_problem, pair.h_source, support_graph(pair.h_source), 0.3,
                                  SynthesisMode::RemoveZeros, trial);
    const auto rho = product_density(n, InitialState::HaarProduct, trial);
    const auto ox = single_qubit_observable(n, 0, PauliAxis::X);
    const auto oz = single_qubit_observable(n, n - 1, PauliAxis::Z);

    // Faithful replay: no deviation at all in the commuting case.
    CHECK(expectation_deviation(pair.h_problem, s, pair.h_source, rho, ox, 0.3) <= 1e-10);

    CouplingVector h_delta(n);
    for (const auto& [key, value] : pair.h_source) h_delta.set(key, rng.uniform(-0.01, 0.01));
    const CouplingVector h_real = pair.h_source + h_delta;
    // sigma_z commutes with every ZZ evolution.
    CHECK(expectation_deviation(pair.h_problem, s, h_real, rho, oz, 0.3) <= 1e-10);

    const double dx = expectation_deviation(pair.h_problem, s, h_real, rho, ox, 0.3);
    const CouplingVector h_eps = error_vector(s, pair.h_problem, pair.h_source, h_delta);
    const double commutator = 0.3 * commutator_norm(build_dense(h_eps).matrix, ox.matrix);
    CHECK(dx <= commutator + 1e-12);
    CHECK(dx <= 2 * ox.op_norm);
  }
}

TEST_CASE("commutator norm") {
  const Eigen::MatrixXcd x = oracle::pauli('X'), z = oracle::pauli('Z');
  CHECK(commutator_norm(z, x) == doctest::Approx(2.0));
  CHECK(commutator_norm(z, z) == doctest::Approx(0.0));
}
