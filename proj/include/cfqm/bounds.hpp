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

#pragma once

#include <cstdint>
#include <vector>

#include "cfqm/schemes.hpp"
#include "cfqm/series.hpp"

namespace cfqm {

inline constexpr double kDefaultRelTol = 1e-6;

struct BoundParams {
  double c = 1.0;     // bound on the Taylor-coefficient norms of A(t)
  double h = 0.0;     // step size
  int s = 1;          // half order
  int m = 1;          // exponentials in the step
  double cbar = 1.0;  // uniform bound from compute_cbar
  int n = 2;          // spins, Trotter term only
};

/// Fills s, m and cbar from the scheme.
BoundParams make_bound_params(const CFQMScheme& scheme, double c, double h, int n);

struct ErrorBreakdown {
  double magnus_taylor = 0.0;
  double cfqm_taylor = 0.0;
  double quadrature = 0.0;
  double trotter = 0.0;

  double total() const { return magnus_taylor + cfqm_taylor + quadrature + trotter; }
};

/// Coefficients f_p of 1/(1 + 2c ln(1 - x)) for p = 0..order, via the
/// composition recursion.
std::vector<real> magnus_coefficients_dp(double c, int order);

/// Same coefficients by power-series composition.
std::vector<real> magnus_coefficients_gf(double c, int order);

/// True when 2c(-ln(1 - h/2)) < 1.
bool magnus_guard(double c, double h);

double magnus_remainder(double c, double h, int s, double rel_tol = kDefaultRelTol);

/// Truncated sum up to a fixed order, for truncation-soundness checks.
double magnus_remainder_to_order(double c, double h, int s, int max_order);

/// h^p sum_z binom(p-1, z-1) (cbar m)^z / z!.
real cfqm_term(double cbar, double h, int m, int p);

/// The same term via composition counts and weak-composition sums.
real cfqm_term_by_counts(double cbar, double h, int m, int p);

double cfqm_remainder(double cbar, double h, int s, int m, double rel_tol = kDefaultRelTol);

double cfqm_remainder_to_order(double cbar, double h, int s, int m, int max_order);

/// c (2s)! / (1 - h/2)^(2s+1).
double quadrature_inner_tail(double c, double h, int s);

/// Direct truncated summation of sum_j (j+2s)!/j! (h/2)^j c.
double quadrature_inner_tail_direct(double c, double h, int s, double tol = 1e-17);

double quadrature_remainder(const RealMatrix& y, double c, double h, int s);

/// The k-sum constant K such that each exponential contributes
/// K (Z_i h)^(2s+1) / (2s+1)!.
double trotter_constant(int n, int s);

double trotter_step_error(const RealMatrix& z, int n, double h, int s);

ErrorBreakdown step_error(const CFQMScheme& scheme, const BoundParams& params,
                          double rel_tol = kDefaultRelTol);

/// True when every guard used by step_error holds at h.
bool step_guards_hold(const CFQMScheme& scheme, double c, double h);

bool suzuki_valid(double lam, double h, int s, double eps_step);

std::int64_t suzuki_step_cost(int q, double lam, double h, int s, double eps_step);

}  // namespace cfqm
