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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "cfqm/bounds.hpp"
#include "cfqm/errors.hpp"
#include "cfqm/propagators.hpp"
#include "cfqm/schemes.hpp"
#include "cfqm/spin_model.hpp"

using namespace cfqm;

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

// Integral of t^k over [-1/2, 1/2].
double centered_moment(int k) { return k % 2 == 1 ? 0.0 : 2.0 / ((k + 1) * std::pow(2.0, k + 1)); }

const char* kMidpoint = "scheme MP s=1 m=1 kind=non-split\ny 1.0000000000000000000\n";

std::string four_two(double second) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "scheme F2 s=2 m=2 kind=non-split\n"
                "y 5.0000000000000000000e-1 %.19e\n"
                "y 5.0000000000000000000e-1 %.19e\n",
                second, -second);
  return buf;
}

}  // namespace

TEST_CASE("T matrix entries and inverse") {
  const RealMatrix t = t_matrix(2, 2);
  CHECK(t(0, 0) == doctest::Approx(1.0));
  CHECK(t(0, 1) == 0.0);
  CHECK(t(1, 0) == 0.0);
  CHECK(t(1, 1) == doctest::Approx(1.0 / 12.0));
  for (int s = 1; s <= 6; ++s) {
    const auto& tm = transform_matrices(s);
    CHECK((tm.T * tm.R - RealMatrix::Identity(s, s)).cwiseAbs().maxCoeff() < 1e-12);
    // T(g, j-1) is the integral of t^(g+j-1) over [-1/2, 1/2].
    for (int g = 0; g < s; ++g)
      for (int j = 1; j <= s; ++j) CHECK(tm.T(g, j - 1) == doctest::Approx(centered_moment(g + j - 1)));
  }
}

TEST_CASE("Gauss-Legendre nodes and weights") {
  const auto g2 = gauss_legendre(2);
  CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(g2.weights[0] == doctest::Approx(1.0));
  const auto g3 = gauss_legendre(3);
  CHECK(g3.nodes[0] == doctest::Approx(-std::sqrt(0.6)));
  CHECK(g3.nodes[1] == doctest::Approx(0.0));
  CHECK(g3.weights[1] == doctest::Approx(8.0 / 9.0));
  CHECK(g3.weights[0] == doctest::Approx(5.0 / 9.0));
  for (int s = 1; s <= 6; ++s) {
    const auto gl = gauss_legendre(s);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k) {
      CHECK(gl.nodes[k] > -1.0);
      CHECK(gl.nodes[k] < 1.0);
      CHECK(gl.weights[k] > 0.0);
      if (k > 0) CHECK(gl.nodes[k] > gl.nodes[k - 1]);
    }
    for (int deg = 0; deg <= 2 * s - 1; ++deg) {
      double sum = 0.0;
      for (int k = 0; k < s; ++k) sum += gl.weights[k] * std::pow(gl.nodes[k], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::fabs(sum - exact) < 1e-13);
    }
  }
  CHECK(code_of([] { gauss_legendre(0); }) == ErrorCode::argument);
  CHECK(code_of([] { gauss_legendre(7); }) == ErrorCode::argument);
}

TEST_CASE("z from y reproduces the weighted moments of a polynomial") {
  // For A(t) of degree < s, sum_k z_k A(c_k/2) = sum_g y_g * integral of t^g A(t).
  for (int s = 1; s <= 4; ++s) {
    RealMatrix y(1, s);
    std::vector<double> a(s);
    for (int g = 0; g < s; ++g) y(0, g) = 0.3 + 0.7 * g - 0.1 * g * g;
    for (int d = 0; d < s; ++d) a[d] = 1.0 / (d + 1.5);
    const RealMatrix z = z_from_y(y);
    const auto gl = gauss_legendre(s);
    double lhs = 0.0;
    for (int k = 0; k < s; ++k) {
      double value = 0.0;
      for (int d = 0; d < s; ++d) value += a[d] * std::pow(gl.nodes[k] / 2.0, d);
      lhs += z(0, k) * value;
    }
    double rhs = 0.0;
    for (int g = 0; g < s; ++g)
      for (int d = 0; d < s; ++d) rhs += y(0, g) * a[d] * centered_moment(g + d);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("xbar values") {
  RealMatrix one(1, 1);
  one << 1.0;
  CHECK(xbar(one, 0, 1) == doctest::Approx(1.0));
  CHECK(xbar(one, 0, 2) == 0.0);
  CHECK(xbar(one, 0, 3) == doctest::Approx(1.0 / 12.0));
  CHECK(xbar(one, 0, 5) == doctest::Approx(1.0 / 80.0));
  CHECK(code_of([&] { xbar(one, 0, 0); }) == ErrorCode::argument);
  const auto& scheme = load_scheme("CF6-5");
  const RealMatrix x = scheme.x();
  for (int i = 0; i < scheme.m; ++i)
    for (int j = 1; j <= scheme.s; ++j) CHECK(xbar(scheme.y, i, j) == doctest::Approx(x(i, j - 1)).epsilon(1e-12));
  for (int i = 0; i < scheme.m; ++i)
    for (int j = 1; j <= 30; ++j) {
      double l1 = 0.0;
      for (int g = 0; g < scheme.s; ++g) l1 += std::fabs(scheme.y(i, g));
      CHECK(std::fabs(xbar(scheme.y, i, j)) <= l1 * std::pow(2.0, -j) / j + 1e-15);
    }
}

TEST_CASE("cbar examples") {
  const auto mp = parse_scheme(kMidpoint);
  CHECK(compute_cbar(mp, 1.0) == doctest::Approx(1.0));
  for (const auto& id : bundled_scheme_ids()) {
    const auto& scheme = load_scheme(id);
    CHECK(compute_cbar(scheme, 2.0) == doctest::Approx(2.0 * compute_cbar(scheme, 1.0)));
    // Brute-force maximum over a long j range.
    double best = 0.0;
    for (int i = 0; i < scheme.m; ++i)
      for (int j = 1; j <= 200; ++j) best = std::max(best, std::fabs(xbar(scheme.y, i, j)));
    CHECK(compute_cbar(scheme, 1.0) == doctest::Approx(best).epsilon(1e-14));
  }
  CFQMScheme zero = parse_scheme(four_two(1.0 / 6.0));
  zero.y.setZero();
  CHECK(compute_cbar(zero, 1.0) == 0.0);
}

TEST_CASE("split maps") {
  RealMatrix a(1, 1), b(1, 1);
  a << 1.0;
  b << 0.5;
  auto [rho1, sigma1] = split_maps(a, b, 1);
  CHECK(rho1(0, 0) == doctest::Approx(1.0));
  CHECK(sigma1(0, 0) == doctest::Approx(0.5));

  // x row equal to T's first row is the y row (1, 0, ...), giving the g = 0
  // quadrature row w_k / 2.
  for (int s = 2; s <= 4; ++s) {
    const auto& tm = transform_matrices(s);
    RealMatrix x0 = tm.T.row(0);
    auto [rho, sigma] = split_maps(x0, RealMatrix::Zero(1, s), s);
    const auto gl = gauss_legendre(s);
    for (int k = 0; k < s; ++k) CHECK(rho(0, k) == doctest::Approx(gl.weights[k] / 2.0).epsilon(1e-12));
    CHECK(sigma.cwiseAbs().maxCoeff() == 0.0);
  }

  // A non-split scheme viewed as split with a zero coupling reproduces z.
  for (const std::string id : {"CF4-2", "CF6-5"}) {
    const auto& scheme = load_scheme(id);
    auto [rho, sigma] = split_maps(RealMatrix::Zero(scheme.m, scheme.s), scheme.x(), scheme.s);
    CHECK(rho.cwiseAbs().maxCoeff() == 0.0);
    CHECK((sigma - scheme.z).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(code_of([] { split_maps(RealMatrix::Zero(1, 2), RealMatrix::Zero(1, 3), 2); }) == ErrorCode::argument);
}

TEST_CASE("bundled schemes load with consistent shapes") {
  const std::vector<std::tuple<std::string, int, int, bool>> expected = {
      {"CF2-1", 1, 1, false}, {"CF4-2", 2, 2, false}, {"CF4-3", 2, 3, false}, {"CF6-5", 3, 5, false},
      {"CF6-6", 3, 6, false}, {"GS6-4", 2, 12, true}, {"GS10-6", 3, 20, true}};
  CHECK(bundled_scheme_ids().size() == expected.size());
  for (const auto& [id, s, m, split] : expected) {
    const auto& scheme = load_scheme(id);
    CHECK(scheme.id == id);
    CHECK(scheme.s == s);
    CHECK(scheme.m == m);
    CHECK(scheme.is_split() == split);
    CHECK(scheme.y.rows() == m);
    CHECK(scheme.z.rows() == m);
    CHECK(scheme.y.cols() == s);
    CHECK((z_from_y(scheme.y) - scheme.z).cwiseAbs().maxCoeff() < 1e-12);
    // Consistency: the y-row sums of the leading column equal the total time.
    double lead = 0.0;
    if (!split) {
      for (int i = 0; i < m; ++i) lead += scheme.y(i, 0);
      CHECK(lead == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      double coupling = 0.0, field = 0.0;
      for (int i = 0; i < scheme.stages; ++i) {
        coupling += scheme.rho.row(i).sum();
        field += scheme.sigma.row(i).sum();
      }
      CHECK(coupling == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(field == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_NOTHROW(check_time_antisymmetry(scheme));
  }
  const auto& cf21 = load_scheme("CF2-1");
  CHECK(cf21.y(0, 0) == doctest::Approx(1.0));
  CHECK(cf21.z(0, 0) == doctest::Approx(1.0));
  const auto& gs = load_scheme("GS6-4");
  CHECK(step_error(gs, make_bound_params(gs, 1.0, 0.1, 6)).trotter == 0.0);
  CHECK(code_of([] { load_scheme("CF8-11"); }) == ErrorCode::lookup);
}

TEST_CASE("time antisymmetry is enforced") {
  CHECK_NOTHROW(parse_scheme(four_two(1.0 / 6.0)));
  const std::string broken =
      "scheme B s=2 m=2 kind=non-split\n"
      "y 5.0000000000000000000e-1 2.0000000000000000000\n"
      "y 5.0000000000000000000e-1 1.0000000000000000000\n";
  CHECK(code_of([&] { parse_scheme(broken); }) == ErrorCode::data_integrity);
  const std::string lopsided =
      "scheme B s=1 m=2 kind=non-split\n"
      "y 2.5000000000000000000e-1\n"
      "y 7.5000000000000000000e-1\n";
  CHECK(code_of([&] { parse_scheme(lopsided); }) == ErrorCode::data_integrity);
}

TEST_CASE("parse errors are data-integrity errors with a location") {
  const std::vector<std::string> bad = {
      "y 1.0000000000000000000\n",
      "scheme X s=1 m=1 kind=non-split\ny 1.0\n",
      "scheme X s=1 m=1 kind=weird\ny 1.0000000000000000000\n",
      "scheme X s=1 m=2 kind=non-split\ny 1.0000000000000000000\n",
      "scheme X s=2 m=1 kind=non-split\ny 1.0000000000000000000\n",
      "scheme X s=1 m=1 kind=non-split\nrho 1.0000000000000000000\n",
      "scheme X s=1 m=1 kind=non-split\ny 1.0000000000000000000\nz 9.0000000000000000000e-1\n",
      "scheme X s=1 m=1 kind=non-split\ny abcdefghijklmnopqrstu\n",
      "scheme X s=9 m=1 kind=non-split\ny 1.0000000000000000000\n",
      "",
  };
  for (const auto& text : bad) {
    CAPTURE(text);
    try {
      parse_scheme(text, "sample.txt");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::data_integrity);
      CHECK(std::string(e.what()).find("sample.txt") != std::string::npos);
    }
  }
  const auto ok = parse_scheme(
      "# comment\nscheme X s=1 m=1 kind=non-split  # trailing\n\ny 1.0000000000000000000 # one\n"
      "z 1.0000000000000000000\n");
  CHECK(ok.m == 1);
}

TEST_CASE("measured convergence orders of every bundled scheme") {
  const auto model = random_model(6, 1);
  for (const auto& id : bundled_scheme_ids()) {
    const auto& scheme = load_scheme(id);
    const auto report = verify_order(scheme, model, default_order_grid(scheme.s));
    CAPTURE(id);
    CAPTURE(report.slope);
    CHECK(report.expected == 2 * scheme.s + 1);
    CHECK(std::fabs(report.slope - report.expected) <= 0.3);
    CHECK(report.accepted);
  }
}

TEST_CASE("a scheme of the wrong order is rejected on load") {
  // Second column 0.1 instead of 1/6 leaves the scheme second order.
  const auto path = std::filesystem::temp_directory_path() / "cfqm_wrong_order.txt";
  {
    std::ofstream out(path);
    out << four_two(0.1);
  }
  CHECK(code_of([&] { load_scheme_file(path); }) == ErrorCode::data_integrity);
  const auto scheme = parse_scheme(four_two(0.1));
  const auto report = verify_order(scheme, random_model(4, 7), default_order_grid(2));
  CHECK(report.slope == doctest::Approx(3.0).epsilon(0.1));
  CHECK_FALSE(report.accepted);
  std::filesystem::remove(path);
  CHECK(code_of([] { load_scheme_file("/nonexistent/cfqm.txt"); }) == ErrorCode::io);
}

TEST_CASE("order check error modes") {
  const auto model = random_model(4, 3);
  const auto& cf6 = load_scheme("CF6-5");
  CHECK(code_of([&] { verify_order(cf6, model, {1e-3, 2e-3}); }) == ErrorCode::grid_too_fine);
  CHECK(code_of([&] { verify_order(cf6, model, {0.8, 0.8}); }) == ErrorCode::outside_asymptotic_regime);
  CHECK(code_of([&] { verify_order(cf6, model, {0.8}); }) == ErrorCode::argument);
}
