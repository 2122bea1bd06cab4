#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "daqc/errors.hpp"
#include "daqc/pauli_core.hpp"
#include "oracles.hpp"

using namespace daqc;

namespace {
const PauliAxis X = PauliAxis::X, Y = PauliAxis::Y, Z = PauliAxis::Z;
}

TEST_CASE("canonical keys orient pairs and swap axes") {
  const CouplingKey k = CouplingKey::canonical(2, 0, X, Y);
  CHECK(k.i == 0);
  CHECK(k.j == 2);
  CHECK(k.mu == Y);
  CHECK(k.nu == X);
  CHECK(to_string(k) == "(0,2,y,x)");
  CHECK_THROWS_AS(CouplingKey::canonical(1, 1, Z, Z), ValidationError);
  CHECK_THROWS_AS(validate_key(CouplingKey::zz(0, 3), 3), ValidationError);
}

TEST_CASE("canonical index follows lexicographic order") {
  const std::vector<CouplingKey> zz{CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)};
  CHECK(canonical_index(CouplingKey::zz(0, 2), zz) == 1);
  CHECK(canonical_index(zz.front(), zz) == 0);

  // Hand enumeration of the nine axis pairs on (0,1): xx xy xz yx yy yz zx zy zz.
  const std::vector<CouplingKey> two = full_universe(2);
  REQUIRE(two.size() == 9);
  CHECK(canonical_index(CouplingKey{0, 1, Z, X}, two) == 6);
  CHECK_THROWS_AS(canonical_index(CouplingKey::zz(0, 2), two), LookupError);
}

TEST_CASE("canonical index round-trips over whole universes") {
  for (int n = 2; n <= 5; ++n) {
    const auto u = full_universe(n);
    CHECK(u.size() == static_cast<std::size_t>(9 * n * (n - 1) / 2));
    CHECK(std::is_sorted(u.begin(), u.end()));
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(canonical_index(u[k], u) == k);
  }
}

TEST_CASE("vector p-norms") {
  const std::vector<double> v{3.0, -4.0};
  CHECK(vector_p_norm(v, 1.0) == 7.0);
  CHECK(vector_p_norm(v, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(vector_p_norm(v, kInfNorm) == 4.0);
  CHECK(vector_p_norm(v, -kInfNorm) == 3.0);
  CHECK(vector_p_norm(std::vector<double>{}, 1.0) == 0.0);
  CHECK_THROWS_AS(vector_p_norm(std::vector<double>{}, -kInfNorm), ValidationError);
  CHECK_THROWS_AS(vector_p_norm(v, -2.0), ValidationError);
  CHECK_THROWS_AS(vector_p_norm(v, 0.0), ValidationError);
}

TEST_CASE("p-norm ordering on random vectors") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.below(12));
    for (double& x : v) x = rng.uniform(-5, 5);
    const double n1 = vector_p_norm(v, 1), n2 = vector_p_norm(v, 2), n3 = vector_p_norm(v, 3.5);
    const double ninf = vector_p_norm(v, kInfNorm), nminf = vector_p_norm(v, -kInfNorm);
    CHECK(n1 >= n2 * (1 - 1e-14));
    CHECK(n2 >= n3 * (1 - 1e-14));
    CHECK(n3 >= ninf * (1 - 1e-14));
    CHECK(ninf >= nminf);
  }
}

TEST_CASE("hadamard division and its indeterminate forms") {
  const CouplingKey a01 = CouplingKey::zz(0, 1), a12 = CouplingKey::zz(1, 2);
  const CouplingVector q = hadamard_divide(CouplingVector(3, {{a01, 2.0}}), CouplingVector(3, {{a01, 4.0}}),
                                           IndeterminatePolicy::Error);
  CHECK(q[a01] == 0.5);

  for (auto policy : {IndeterminatePolicy::Error, IndeterminatePolicy::Zero, IndeterminatePolicy::Skip}) {
    const CouplingVector z = hadamard_divide(CouplingVector(3), CouplingVector(3, {{a01, 4.0}}), policy);
    CHECK(z.contains(a01));
    CHECK(z[a01] == 0.0);
  }

  const CouplingVector a(3, {{a01, 1.0}, {a12, 0.0}});
  const CouplingVector b(3, {{a01, 2.0}, {a12, 0.0}});
  const CouplingVector zero = hadamard_divide(a, b, IndeterminatePolicy::Zero);
  CHECK(zero[a01] == 0.5);
  CHECK(zero.contains(a12));
  CHECK(zero[a12] == 0.0);
  CHECK_FALSE(hadamard_divide(a, b, IndeterminatePolicy::Skip).contains(a12));
  CHECK_THROWS_AS(hadamard_divide(a, b, IndeterminatePolicy::Error), ValidationError);
  CHECK_THROWS_AS(hadamard_divide(CouplingVector(3, {{a12, 1.0}}), b, IndeterminatePolicy::Zero),
                  SimulabilityError);
}

TEST_CASE("divide then multiply reproduces the numerator where the divisor is nonzero") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const CouplingVector b = oracle::random_couplings(rng, n, false, 0.4);
    CouplingVector a(n);
    for (const auto& [key, value] : b)
      if (rng.coin()) a.set(key, rng.uniform(-3, 3));
    const CouplingVector back = hadamard_multiply(hadamard_divide(a, b, IndeterminatePolicy::Zero), b);
    for (const auto& [key, value] : b)
      if (value != 0.0) CHECK(back[key] == doctest::Approx(a[key]).epsilon(1e-14));
  }
}

TEST_CASE("graph difference") {
  const InteractionGraph tri = oracle::zz_complete(3);
  const InteractionGraph path = oracle::zz_graph(3, {{0, 1}, {0, 2}});
  const InteractionGraph diff = graph_difference(tri, path);
  CHECK(diff.edge_count() == 1);
  CHECK(diff.contains(CouplingKey::zz(1, 2)));
  CHECK(graph_difference(tri, tri).empty());

  InteractionGraph nine(3);
  for (const auto& key : full_universe(3)) nine.add(key);
  CHECK(nine.edge_count() == 27);
  CHECK(graph_difference(nine, tri).edge_count() == 24);
}

TEST_CASE("difference then union restores the larger graph") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const InteractionGraph d = declared_graph(oracle::random_couplings(rng, n, false, 0.5));
    InteractionGraph s(n);
    for (const auto& key : d.edges())
      if (rng.coin()) s.add(key);
    REQUIRE(s.is_subgraph_of(d));
    CHECK(graph_union(graph_difference(d, s), s) == d);
  }
}

TEST_CASE("multigraph degree") {
  CHECK(degree(oracle::zz_chain(4)) == 2);
  CHECK(degree(oracle::zz_complete(5)) == 4);
  InteractionGraph chain_nnn = oracle::zz_chain(5);
  for (int i = 0; i + 2 < 5; ++i) chain_nnn.add(CouplingKey::zz(i, i + 2));
  CHECK(degree(chain_nnn) == 4);
  CHECK(degree(graph_difference(chain_nnn, oracle::zz_chain(5))) == 2);

  // Two axis pairs on the same qubit pair count as two edges.
  InteractionGraph multi(2);
  multi.add(CouplingKey::zz(0, 1));
  multi.add(CouplingKey{0, 1, X, X});
  CHECK(degree(multi) == 2);
  CHECK(degree(InteractionGraph(3)) == 0);
}

TEST_CASE("support graphs drop zeros, declared graphs keep them") {
  const CouplingVector v(3, {{CouplingKey::zz(0, 1), 1.0}, {CouplingKey::zz(1, 2), 0.0}});
  CHECK(support_graph(v).edge_count() == 1);
  CHECK(declared_graph(v).edge_count() == 2);
  CHECK(v[CouplingKey::zz(0, 2)] == 0.0);
}

TEST_CASE("coupling files round-trip bit-exactly") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    CouplingVector v = oracle::random_couplings(rng, n, false, 0.3, 1e-7, 1e7);
    v.set(CouplingKey::zz(0, 1), 0.0);
    std::stringstream s;
    write_couplings(s, v);
    CHECK(read_couplings(s) == v);
  }
}

TEST_CASE("coupling file parsing") {
  std::istringstream ok("# comment\nn_qubits=3\n0 1 z z 1.5\n1 2 x y  # support only\n2 0 x z -2\n");
  const CouplingVector v = read_couplings(ok);
  CHECK(v.n_qubits() == 3);
  CHECK(v[CouplingKey::zz(0, 1)] == 1.5);
  CHECK(v.contains(CouplingKey{1, 2, X, Y}));
  CHECK(v[CouplingKey{0, 2, Z, X}] == -2.0);

  std::istringstream dup("n_qubits=2\n0 1 z z 1\n1 0 z z 2\n");
  CHECK_THROWS_AS(read_couplings(dup), ValidationError);
  std::istringstream bad_axis("n_qubits=2\n0 1 z w 1\n");
  CHECK_THROWS_AS(read_couplings(bad_axis), ValidationError);
  std::istringstream no_header("0 1 z z 1\n");
  CHECK_THROWS_AS(read_couplings(no_header), ValidationError);
  std::istringstream out_of_range("n_qubits=2\n0 2 z z 1\n");
  CHECK_THROWS_AS(read_couplings(out_of_range), ValidationError);
  std::istringstream nan("n_qubits=2\n0 1 z z nan\n");
  CHECK_THROWS_AS(read_couplings(nan), ValidationError);
}
