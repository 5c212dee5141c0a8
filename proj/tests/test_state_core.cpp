// Copyright 2026 The qcorr developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qcorr/random.hpp"
#include "qcorr/state.hpp"

using namespace qcorr;
using namespace qcorr::testing;

TEST_CASE("layout invariants") {
  CHECK_THROWS_AS(SubsystemLayout({2, 2}, {"A", "A"}), input_error);
  CHECK_THROWS_AS(SubsystemLayout({2, 0}, {"A", "B"}), input_error);
  SubsystemLayout l({2, 3, 4});
  CHECK(l.ambient_dim() == 24);
  CHECK(l.labels() == std::vector<std::string>{"A", "B", "C"});
  CHECK(l.strides() == std::vector<int>{12, 4, 1});
  CHECK_THROWS_AS(l.index_of("Z"), input_error);
}

TEST_CASE("density operator validation") {
  SubsystemLayout l({2});
  Matrix m(2, 2);
  m << 0.5, Complex(0, 0.2), Complex(0, 0.2), 0.5;  // not Hermitian
  CHECK_THROWS_AS(DensityOperator(m, l), input_error);

  m << 0.6, 0, 0, 0.6;  // trace 1.2
  CHECK_THROWS_AS(DensityOperator(m, l), input_error);

  m << 1.2, 0, 0, -0.2;  // negative eigenvalue
  CHECK_THROWS_AS(DensityOperator(m, l), input_error);

  m << 0.75, 0.1, 0.1, 0.25;
  CHECK_NOTHROW(DensityOperator(m, l));
}

TEST_CASE("tensor product basics") {
  SubsystemLayout qa({2}, {"A"}), qb({2}, {"B"});
  auto half_a = maximally_mixed(qa);
  auto half_b = maximally_mixed(qb);
  auto prod = tensor_product(half_a, half_b);
  CHECK(prod.layout().dims() == std::vector<int>{2, 2});
  CHECK(max_abs_diff(prod.matrix(), Matrix::Identity(4, 4) / 4.0) < 1e-15);

  auto zero = basis_state(qa, 0).to_density();
  auto one = basis_state(qb, 1).to_density();
  auto zo = tensor_product(zero, one);
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;  // |01><01|
  CHECK(max_abs_diff(zo.matrix(), expect) < 1e-15);
}

TEST_CASE("tensor product trace is multiplicative on random inputs") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto a = random_density(SubsystemLayout({3}, {"A"}), 3, seed);
    auto b = random_density(SubsystemLayout({2}, {"B"}), 2, seed + 100);
    auto ab = tensor_product(a, b);
    CHECK(std::abs(ab.matrix().trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace examples") {
  auto bell = bell_state();
  auto rho_a = partial_trace(bell, {"A"});
  CHECK(max_abs_diff(rho_a.matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-14);

  auto a = random_density(SubsystemLayout({2}, {"A"}), 2, 7);
  auto b = random_density(SubsystemLayout({3}, {"B"}), 3, 8);
  auto ab = tensor_product(a, b);
  CHECK(max_abs_diff(partial_trace(ab, {"A"}).matrix(), a.matrix()) < 1e-12);
  CHECK(max_abs_diff(partial_trace(ab, {"B"}).matrix(), b.matrix()) < 1e-12);

  CHECK_THROWS_AS(partial_trace(ab, {"Q"}), input_error);
}

TEST_CASE("Schmidt symmetry of bipartite reductions") {
  // Nonzero spectra of the two reductions of a pure state coincide.
  SubsystemLayout l({3, 3}, {"A", "B"});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto psi = random_pure(l, seed);
    auto sa = spectral_decompose(partial_trace(psi, {"A"}));
    auto sb = spectral_decompose(partial_trace(psi, {"B"}));
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(sa.eigenvalues[i] - sb.eigenvalues[i]) < 1e-10);
  }
}

TEST_CASE("spectral decomposition") {
  SubsystemLayout l({3});
  auto third = maximally_mixed(l);
  auto sd = spectral_decompose(third);
  for (int i = 0; i < 3; ++i) CHECK(sd.eigenvalues[i] == Catch::Approx(1.0 / 3.0));

  SubsystemLayout q({2});
  Matrix m(2, 2);
  m << 0.75, 0, 0, 0.25;
  auto sd2 = spectral_decompose(DensityOperator(m, q));
  CHECK(sd2.eigenvalues[0] == Catch::Approx(0.75));
  CHECK(sd2.eigenvalues[1] == Catch::Approx(0.25));
  CHECK(std::abs(sd2.eigenvectors(0, 0)) == Catch::Approx(1.0));
  CHECK(std::abs(sd2.eigenvectors(1, 1)) == Catch::Approx(1.0));

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto rho = random_density(SubsystemLayout({4}), 3, seed);
    auto s = spectral_decompose(rho);
    CHECK(std::abs(s.eigenvalues.sum() - 1.0) < 1e-10);
    Matrix recon = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK(max_abs_diff(recon, rho.matrix()) < 1e-10);
  }
}

TEST_CASE("purification") {
  // Pure state: trivial ancilla.
  auto zero = basis_state(SubsystemLayout({2}, {"A"}), 0).to_density();
  auto psi = purify(zero);
  CHECK(psi.layout().dims() == std::vector<int>{2, 1});
  CHECK(max_abs_diff(partial_trace(psi, {"A"}).matrix(), zero.matrix()) < 1e-10);

  // Maximally mixed qubit purifies to a maximally entangled pair.
  auto half = maximally_mixed(SubsystemLayout({2}, {"A"}));
  auto bellish = purify(half);
  CHECK(bellish.layout().dims() == std::vector<int>{2, 2});
  CHECK(max_abs_diff(partial_trace(bellish, {"A"}).matrix(), half.matrix()) < 1e-10);

  // Random rank-2 two-qubit state: three-party purification reduces back.
  auto rho = random_density(SubsystemLayout({2, 2}, {"A", "B"}), 2, 42);
  auto pur = purify(rho);
  CHECK(pur.layout().dims() == std::vector<int>{2, 2, 2});
  CHECK(max_abs_diff(partial_trace(pur, {"A", "B"}).matrix(), rho.matrix()) < 1e-10);
}

TEST_CASE("random generation is deterministic under the seed") {
  SubsystemLayout l({2, 2});
  auto p1 = random_pure(l, 99);
  auto p2 = random_pure(l, 99);
  CHECK((p1.amplitudes() - p2.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(p1.amplitudes().norm() - 1.0) < 1e-12);

  auto d1 = random_density(l, 3, 5);
  auto d2 = random_density(l, 3, 5);
  CHECK(max_abs_diff(d1.matrix(), d2.matrix()) == 0.0);
}

TEST_CASE("Haar pure states average to the maximally mixed state") {
  SubsystemLayout l({2});
  Matrix mean = Matrix::Zero(2, 2);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto psi = random_pure(l, derive_seed(12345, i));
    mean += psi.amplitudes() * psi.amplitudes().adjoint();
  }
  mean /= static_cast<double>(n);
  CHECK(max_abs_diff(mean, Matrix::Identity(2, 2) / 2.0) < 0.02);
}

TEST_CASE("subsystem permutation and contraction") {
  auto ghz = ghz_state();
  auto perm = permute_subsystems(ghz, {"C", "A", "B"});
  CHECK(perm.layout().labels() == std::vector<std::string>{"C", "A", "B"});
  // GHZ is symmetric under any subsystem permutation.
  CHECK((perm.amplitudes() - ghz.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);

  auto bell = bell_state();
  Vector w(2);
  w << 1.0, 0.0;
  auto reduced = contract_subsystem(bell.amplitudes(), bell.layout(), "B", w);
  CHECK(std::abs(reduced[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(reduced[1]) < 1e-15);

  auto rho = bell.to_density();
  Matrix cond = contract_subsystem(rho.matrix(), rho.layout(), "B", w);
  CHECK(std::abs(cond.trace().real() - 0.5) < 1e-14);

  // Contracting a product state with any unit vector leaves the other factor.
  auto a = random_density(SubsystemLayout({2}, {"A"}), 2, 1);
  auto b = random_density(SubsystemLayout({2}, {"B"}), 2, 2);
  auto ab = tensor_product(a, b);
  Rng rng(3);
  Vector u = gaussian_vector(2, rng);
  u /= u.norm();
  Matrix c = contract_subsystem(ab.matrix(), ab.layout(), "B", u);
  c /= c.trace().real();
  CHECK(max_abs_diff(c, a.matrix()) < 1e-12);
}

TEST_CASE("embedded operators act on the right subsystem") {
  SubsystemLayout l({2, 2}, {"A", "B"});
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Matrix xb = embed_operator(x, l, "B");
  auto s00 = basis_state(l, 0);
  Vector flipped = xb * s00.amplitudes();
  CHECK(std::abs(flipped[1] - 1.0) < 1e-15);  // |00> -> |01>
  Matrix xa = embed_operator(x, l, "A");
  Vector flipped_a = xa * s00.amplitudes();
  CHECK(std::abs(flipped_a[2] - 1.0) < 1e-15);  // |00> -> |10>
}
