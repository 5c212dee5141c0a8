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
#include "qcorr/ensemble.hpp"
#include "qcorr/random.hpp"
#include "qcorr/tsallis.hpp"

using namespace qcorr;
using namespace qcorr::testing;

TEST_CASE("deformed logarithm") {
  EntropyParameter q2(2.0), q1(1.0);
  CHECK(q_log(1.0, q2) == 0.0);
  CHECK(q_log(1.0, EntropyParameter(0.7)) == 0.0);
  // (2^-1 - 1)/(-1) = 0.5
  CHECK(q_log(2.0, q2) == Catch::Approx(0.5).margin(1e-15));
  CHECK(q_log(std::exp(1.0), q1) == Catch::Approx(1.0).margin(1e-15));
  CHECK_THROWS_AS(q_log(0.0, q2), std::domain_error);
  CHECK_THROWS_AS(q_log(-1.0, q1), std::domain_error);
  CHECK_THROWS_AS(EntropyParameter(-0.5), input_error);
}

TEST_CASE("entropy of pure and mixed states") {
  EntropyParameter q2(2.0);
  CHECK(tsallis_entropy(bell_state().to_density(), q2) < 1e-12);  // globally pure

  auto half = maximally_mixed(SubsystemLayout({2}));
  CHECK(tsallis_entropy(half, q2) == Catch::Approx(0.5).margin(1e-12));  // 1 - 1/2

  Matrix m(2, 2);
  m << 0.75, 0, 0, 0.25;
  auto rho = DensityOperator(m, SubsystemLayout({2}));
  // 1 - (9/16 + 1/16) = 0.375
  CHECK(tsallis_entropy(rho, q2) == Catch::Approx(0.375).margin(1e-12));
}

TEST_CASE("maximum entropy closed form") {
  CHECK(max_tsallis_entropy(2, EntropyParameter(2.0)) == Catch::Approx(0.5).margin(1e-12));
  CHECK(max_tsallis_entropy(3, EntropyParameter(1.0)) ==
        Catch::Approx(std::log(3.0)).margin(1e-12));
  // Consistency with the entropy of I/d at scattered (d, q).
  for (int d : {2, 3, 4}) {
    for (double q : {0.5, 1.0, 1.3, 2.0, 3.0}) {
      EntropyParameter qp(q);
      auto mixed = maximally_mixed(SubsystemLayout({d}));
      CHECK(std::abs(tsallis_entropy(mixed, qp) - max_tsallis_entropy(d, qp)) < 1e-12);
    }
  }
}

TEST_CASE("entropy bounds and continuity at q = 1") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rho = random_density(SubsystemLayout({4}), 3, seed);
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
      EntropyParameter qp(q);
      const double s = tsallis_entropy(rho, qp);
      CHECK(s >= 0.0);
      CHECK(s <= max_tsallis_entropy(4, qp) + 1e-10);
    }
    const double s1 = tsallis_entropy(rho, EntropyParameter(1.0));
    CHECK(std::abs(tsallis_entropy(rho, EntropyParameter(1.0 + 1e-6)) - s1) < 1e-4);
    CHECK(std::abs(tsallis_entropy(rho, EntropyParameter(1.0 - 1e-6)) - s1) < 1e-4);
  }
}

TEST_CASE("pseudo-additivity on product states") {
  // S_q(rho (x) sigma) = S_q(rho) + S_q(sigma) + (1-q) S_q(rho) S_q(sigma)
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = random_density(SubsystemLayout({2}, {"A"}), 2, seed);
    auto b = random_density(SubsystemLayout({3}, {"B"}), 2, seed + 50);
    auto ab = tensor_product(a, b);
    for (double q : {1.0, 1.7, 2.0, 3.0}) {
      EntropyParameter qp(q);
      const double sa = tsallis_entropy(a, qp);
      const double sb = tsallis_entropy(b, qp);
      const double expect = sa + sb + (1.0 - q) * sa * sb;
      CHECK(std::abs(tsallis_entropy(ab, qp) - expect) < 1e-9);
    }
  }
}

TEST_CASE("mutual entropy") {
  EntropyParameter q2(2.0);
  auto prod = tensor_product(basis_state(SubsystemLayout({2}, {"A"}), 0),
                             basis_state(SubsystemLayout({2}, {"B"}), 1));
  CHECK(std::abs(q_mutual_entropy(prod.to_density(), q2)) < 1e-12);

  CHECK(q_mutual_entropy(bell_state().to_density(), q2) ==
        Catch::Approx(1.0).margin(1e-12));

  // Product of maximally mixed qubits: 0.5 + 0.5 - 0.75 = 0.25. Nonzero by
  // pseudo-additivity; this is the expected Tsallis behaviour, not a bug.
  auto mm = tensor_product(maximally_mixed(SubsystemLayout({2}, {"A"})),
                           maximally_mixed(SubsystemLayout({2}, {"B"})));
  CHECK(q_mutual_entropy(mm, q2) == Catch::Approx(0.25).margin(1e-12));

  CHECK_THROWS_AS(q_mutual_entropy(ghz_state().to_density(), q2), input_error);
  // The split form handles the three-party case.
  CHECK(q_mutual_entropy_split(ghz_state().to_density(), {"A", "B"}, q2) ==
        Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("Tsallis-q difference") {
  EntropyParameter q2(2.0);
  SubsystemLayout q({2});
  auto half = maximally_mixed(q);

  Ensemble singleton({1.0}, {half}, half);
  CHECK(std::abs(tsallis_q_difference(singleton, q2)) < 1e-12);

  Ensemble comp({0.5, 0.5},
                {basis_state(q, 0).to_density(), basis_state(q, 1).to_density()}, half);
  CHECK(tsallis_q_difference(comp, q2) == Catch::Approx(0.5).margin(1e-12));

  // Declared parent must reconstruct.
  CHECK_THROWS_AS(Ensemble({0.5, 0.5},
                           {basis_state(q, 0).to_density(), basis_state(q, 0).to_density()},
                           half),
                  input_error);
}

TEST_CASE("q difference is nonnegative for q >= 1 and converges to Holevo") {
  SubsystemLayout l({3});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // Random 3-member ensemble; parent is the mixture itself.
    Rng rng(seed);
    std::vector<double> w{0.2, 0.3, 0.5};
    std::vector<DensityOperator> members;
    Matrix mix = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      members.push_back(random_density(l, 2, derive_seed(seed, i)));
      mix += w[i] * members[i].matrix();
    }
    Ensemble ens(w, members, DensityOperator::unchecked(mix, l));
    for (double q : {1.0, 1.5, 2.0, 3.0})
      CHECK(tsallis_q_difference(ens, EntropyParameter(q)) >= -1e-10);
    const double hol = tsallis_q_difference(ens, EntropyParameter(1.0));
    CHECK(std::abs(tsallis_q_difference(ens, EntropyParameter(1.0 + 1e-6)) - hol) < 1e-4);
  }
}

TEST_CASE("induced ensembles") {
  auto bell = bell_state().to_density();
  Matrix id = Matrix::Identity(2, 2);
  auto comp = Rank1Measurement::from_basis(id);

  auto ens = induced_ensemble(bell, comp, "B");
  REQUIRE(ens.size() == 2);
  CHECK(ens.weights()[0] == Catch::Approx(0.5));
  CHECK(ens.weights()[1] == Catch::Approx(0.5));
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(max_abs_diff(ens.members()[0].matrix(), p0) < 1e-12);
  CHECK(max_abs_diff(ens.members()[1].matrix(), p1) < 1e-12);

  // Product state: every conditional equals rho_A.
  auto a = random_density(SubsystemLayout({2}, {"A"}), 2, 11);
  auto b = random_density(SubsystemLayout({2}, {"B"}), 2, 12);
  auto ab = tensor_product(a, b);
  Rng rng(13);
  auto meas = Rank1Measurement::from_basis(haar_unitary(2, rng));
  auto prod_ens = induced_ensemble(ab, meas, "B");
  for (const auto& cond : prod_ens.members())
    CHECK(max_abs_diff(cond.matrix(), a.matrix()) < 1e-11);

  // Completeness identity: sum_x p_x rho_A^x = rho_A on random inputs.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rho = random_density(SubsystemLayout({2, 3}, {"A", "B"}), 4, seed);
    Rng r2(seed + 77);
    auto m3 = Rank1Measurement::from_isometry(haar_isometry(5, 3, r2));
    auto e = induced_ensemble(rho, m3, "B");
    Matrix mixed = Matrix::Zero(2, 2);
    for (std::size_t i = 0; i < e.size(); ++i)
      mixed += e.weights()[i] * e.members()[i].matrix();
    CHECK(max_abs_diff(mixed, partial_trace(rho, {"A"}).matrix()) < 1e-9);
  }

  // Incomplete measurement is rejected.
  Vector v0(2);
  v0 << 1.0, 0.0;
  CHECK_THROWS_AS(Rank1Measurement({v0}), input_error);
}

TEST_CASE("q-expectation weights sum to at most 1 for q >= 1") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<double> p;
    double sum = 0;
    for (int i = 0; i < 5; ++i) {
      p.push_back(rng.uniform());
      sum += p.back();
    }
    for (auto& x : p) x /= sum;
    for (double q : {1.0, 1.2, 2.0, 4.0}) {
      EntropyParameter qp(q);
      double qsum = 0;
      for (double x : p) qsum += q_weight(x, qp);
      CHECK(qsum <= 1.0 + 1e-12);
    }
  }
}
