// Copyright 2026 The cfqm Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "cfqm/errors.hpp"
#include "cfqm/spin_model.hpp"

using namespace cfqm;
using cd = std::complex<double>;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix pauli(char which) {
  ComplexMatrix p(2, 2);
  switch (which) {
    case 'x': p << 0, 1, 1, 0; break;
    case 'y': p << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': p << 1, 0, 0, -1; break;
    default: p = ComplexMatrix::Identity(2, 2);
  }
  return p;
}

// Pauli on site (1-based), site 1 being the leftmost tensor factor.
ComplexMatrix on_site(char which, int site, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 1; k <= n; ++k) out = kron(out, k == site ? pauli(which) : pauli('i'));
  return out;
}

ComplexMatrix oracle_hamiltonian(const HeisenbergModel& model, double t) {
  const int n = model.n;
  const int dim = 1 << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int i = 1; i < n; ++i)
    for (char a : {'x', 'y', 'z'}) h += on_site(a, i, n) * on_site(a, i + 1, n);
  for (int i = 1; i <= n; ++i) h += std::cos(model.phases[i - 1] + model.freqs[i - 1] * t) * on_site('z', i, n);
  return h / (4.0 * n);
}

double spectral_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("Hamiltonian matches a Kronecker-product construction") {
  for (int n : {2, 3, 4, 5}) {
    const auto model = random_model(n, 40 + n);
    for (double t : {0.0, 0.37, 5.2}) {
      const auto h = hamiltonian_at(model, t);
      CHECK((h.matrix() - oracle_hamiltonian(model, t)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("two spins with vanishing fields") {
  HeisenbergModel model{2, {M_PI / 2, M_PI / 2}, {0.7, 0.3}};
  const auto h = hamiltonian_at(model, 0.0).matrix();
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  for (char a : {'x', 'y', 'z'}) expected += kron(pauli(a), pauli(a));
  expected /= 8.0;
  CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-15);
  // Triplet energy 1/8, singlet energy -3/8.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0 / 8.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("hermiticity and norm bound over random samples") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> time(0.0, 50.0);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto model = random_model(n, rng());
    const double t = time(rng);
    const auto h = hamiltonian_at(model, t).matrix();
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * h.cwiseAbs().maxCoeff());
    const double norm = spectral_norm(h);
    CHECK(norm <= 3.0 * (n - 1) / (4.0 * n) + 0.25 + 1e-12);
    CHECK(norm <= 1.0);
  }
}

TEST_CASE("random models are seeded and in range") {
  const auto a = random_model(6, 9);
  const auto b = random_model(6, 9);
  const auto c = random_model(6, 10);
  CHECK(a.phases == b.phases);
  CHECK(a.freqs == b.freqs);
  CHECK(a.phases != c.phases);
  for (int i = 0; i < 6; ++i) {
    CHECK(a.phases[i] >= 0.0);
    CHECK(a.phases[i] < 2.0 * M_PI);
    CHECK(a.freqs[i] >= 0.5);
    CHECK(a.freqs[i] <= 1.0);
  }
  const auto s = static_model(4, 1);
  for (double w : s.freqs) CHECK(w == 0.0);
  CHECK((hamiltonian_at(s, 0.0).matrix() - hamiltonian_at(s, 9.0).matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("periodicity with a common frequency") {
  HeisenbergModel model{4, {0.1, 1.2, 2.3, 3.4}, {0.8, 0.8, 0.8, 0.8}};
  const double period = 2.0 * M_PI / 0.8;
  for (double t : {0.0, 1.3, 7.7}) {
    const auto diff = hamiltonian_at(model, t).matrix() - hamiltonian_at(model, t + period).matrix();
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("odd and even classes partition the Hamiltonian") {
  for (int n : {2, 3, 4, 5, 6}) {
    const auto model = random_model(n, 3 * n);
    for (double t : {0.0, 2.5}) {
      const auto [odd, even] = split_at(model, t);
      CHECK((odd.matrix() + even.matrix() - hamiltonian_at(model, t).matrix()).cwiseAbs().maxCoeff() < 1e-15);
      for (Parity parity : {Parity::odd, Parity::even}) {
        const auto terms = parity_terms(model, t, parity);
        // Blocks in a class act on disjoint sites.
        std::vector<int> used(n, 0);
        for (const auto& term : terms)
          for (int k = 0; k < term.sites; ++k) ++used[term.first_site + k];
        for (int u : used) CHECK(u <= 1);
        for (std::size_t a = 0; a < terms.size(); ++a)
          for (std::size_t b = a + 1; b < terms.size(); ++b) {
            const auto ma = embed({terms[a]}, n);
            const auto mb = embed({terms[b]}, n);
            CHECK((ma * mb - mb * ma).cwiseAbs().maxCoeff() < 1e-13);
          }
      }
    }
  }
}

TEST_CASE("two spins: the even class carries only a field") {
  const auto model = random_model(2, 5);
  const auto even = parity_terms(model, 0.4, Parity::even);
  for (const auto& term : even) CHECK(term.sites == 1);
  const auto [odd, even_h] = split_at(model, 0.4);
  // The even part is diagonal.
  const auto m = even_h.matrix();
  CHECK((m - ComplexMatrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  // Bonds (2k-1, 2k) are odd; bond (2, 3) is even for n = 3.
  const auto three = random_model(3, 5);
  const auto odd3 = parity_terms(three, 0.0, Parity::odd);
  const auto even3 = parity_terms(three, 0.0, Parity::even);
  int odd_bonds = 0, even_bonds = 0;
  for (const auto& t : odd3) odd_bonds += t.sites == 2 && t.first_site == 0;
  for (const auto& t : even3) even_bonds += t.sites == 2 && t.first_site == 1;
  CHECK(odd_bonds == 1);
  CHECK(even_bonds == 1);
}

TEST_CASE("coupling and field parts") {
  const auto model = random_model(5, 12);
  const double t = 1.7;
  const auto coupling = coupling_part(model).matrix();
  const auto field = field_diagonal(model, t);
  const ComplexMatrix sum = coupling + ComplexMatrix(field.cast<cd>().asDiagonal());
  CHECK((sum - hamiltonian_at(model, t).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  const auto f2 = field_diagonal(model, 4.0);
  // Diagonal fields commute at different times; the coupling is time independent.
  CHECK(((field.array() * f2.array()) - (f2.array() * field.array())).abs().maxCoeff() == 0.0);
}

TEST_CASE("Taylor coefficient bound") {
  CHECK(taylor_bound_c(random_model(4, 1)).c == 1.0);
  CHECK_FALSE(taylor_bound_c(random_model(4, 1)).warning);
  CHECK(taylor_bound_c(static_model(4, 1)).c == 1.0);
  HeisenbergModel fast{3, {0.0, 0.0, 0.0}, {0.5, 2.0, 1.0}};
  const auto b = taylor_bound_c(fast);
  CHECK(b.c == 2.0);
  CHECK(b.warning);
  // Empirical check: (1/j!) ||d^j H/dt^j|| <= c for a random model, via
  // the analytic derivative of the field terms.
  const auto model = random_model(4, 77);
  for (int j = 1; j <= 4; ++j) {
    double fact = 1.0;
    for (int k = 2; k <= j; ++k) fact *= k;
    for (double t : {0.0, 1.0, 3.0}) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(16);
      for (int i = 0; i < 4; ++i) {
        const double w = model.freqs[i];
        const double value = std::pow(w, j) * std::cos(model.phases[i] + w * t + j * M_PI / 2.0);
        for (int state = 0; state < 16; ++state) d(state) += value * (((state >> (3 - i)) & 1) ? -1.0 : 1.0);
      }
      CHECK(d.cwiseAbs().maxCoeff() / (16.0 * fact) <= 1.0);
    }
  }
}

TEST_CASE("model text round trip and errors") {
  const auto model = random_model(5, 31);
  const auto back = parse_model(format_model(model));
  CHECK(back.n == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(back.phases[i] == model.phases[i]);
    CHECK(back.freqs[i] == model.freqs[i]);
  }
  CHECK(code_of([] { parse_model("phi 1 2\n"); }) == ErrorCode::argument);
  CHECK(code_of([] { parse_model("heisenberg n=2\nphi 1 2\nomega 1\n"); }) == ErrorCode::argument);
  CHECK(code_of([] { parse_model("heisenberg n=2\nphi 1 x\nomega 1 1\n"); }) == ErrorCode::argument);
  CHECK(code_of([] { parse_model("heisenberg n=2\nbeta 1 2\n"); }) == ErrorCode::argument);
}

TEST_CASE("size limits and argument errors") {
  CHECK(code_of([] { hamiltonian_at(random_model(13, 1), 0.0); }) == ErrorCode::resource);
  CHECK(code_of([] { random_model(1, 1); }) == ErrorCode::argument);
  ComplexMatrix bad(2, 2);
  bad << 1, cd(0, 1), cd(0, 1), 1;
  CHECK(code_of([&] { DenseHermitian h(bad); }) == ErrorCode::argument);
}
