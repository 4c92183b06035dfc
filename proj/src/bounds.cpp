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

#include "cfqm/bounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>

#include "cfqm/errors.hpp"

namespace cfqm {

namespace {

constexpr int kMagnusOrderStart = 40;
constexpr int kMagnusOrderCap = 1280;
constexpr int kCfqmOrderCap = 4000;
constexpr int kCountTableOrder = 128;

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool close_rel(real a, real b, real tol) {
  real scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol * scale;
}

// Sums term(p) from p = start until the term drops below rel_tol times the
// running sum after at least three consecutive decreases, and the geometric
// tail estimate from the last ratio is below half of that.
template <class Term>
real sum_tail(Term term, int start, int cap, double rel_tol, const char* what) {
  real sum = 0.0L;
  real prev = std::numeric_limits<real>::infinity();
  int decreasing = 0;
  for (int p = start; p <= cap; ++p) {
    real t = term(p);
    sum += t;
    if (t == 0.0L && prev == 0.0L) return sum;
    if (t < prev) {
      ++decreasing;
    } else {
      decreasing = 0;
    }
    const real ratio = std::isfinite(prev) && prev > 0.0L ? t / prev : 1.0L;
    prev = t;
    if (decreasing >= 3 && t <= rel_tol * sum && ratio < 1.0L &&
        t * ratio / (1.0L - ratio) <= 0.5L * rel_tol * sum) {
      return sum;
    }
  }
  fail(ErrorCode::divergent_regime, std::string(what) + ": tail did not converge by order " +
                                        std::to_string(cap) + "; shrink h");
}

const std::vector<real>& magnus_table(double c, int order) {
  static std::mutex mu;
  static std::map<double, std::vector<real>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& entry = cache[c];
  if (static_cast<int>(entry.size()) > order) return entry;
  int size = kMagnusOrderStart;
  while (size < order) size *= 2;
  std::vector<real> dp = magnus_coefficients_dp(c, size);
  std::vector<real> gf = magnus_coefficients_gf(c, size);
  for (int p = 0; p <= size; ++p) {
    if (!close_rel(dp[p], gf[p], 1e-10L)) {
      fail(ErrorCode::internal, "magnus coefficient mismatch at p=" + std::to_string(p));
    }
  }
  entry = std::move(dp);
  return entry;
}

// counts[p][z] = number of compositions of p into z parts, by recursion on
// the last part.
const std::vector<std::vector<real>>& count_table() {
  static const std::vector<std::vector<real>> table = [] {
    std::vector<std::vector<real>> t(kCountTableOrder + 1, std::vector<real>(kCountTableOrder + 1, 0.0L));
    t[0][0] = 1.0L;
    for (int p = 1; p <= kCountTableOrder; ++p)
      for (int z = 1; z <= p; ++z)
        for (int j = 1; j <= p; ++j) t[p][z] += t[p - j][z - 1];
    return t;
  }();
  return table;
}

// weak[z] = sum over weak compositions of z into m parts of 1/prod k_i!.
const std::vector<real>& weak_table(int m) {
  static std::mutex mu;
  static std::map<int, std::vector<real>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<real> w(kCountTableOrder + 1);
  for (int z = 0; z <= kCountTableOrder; ++z) w[z] = weak_composition_factorial_sum(z, m);
  return cache.emplace(m, std::move(w)).first->second;
}

real factorial(int k) {
  real f = 1.0L;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

BoundParams make_bound_params(const CFQMScheme& scheme, double c, double h, int n) {
  BoundParams p;
  p.c = c;
  p.h = h;
  p.s = scheme.s;
  p.m = scheme.m;
  p.cbar = compute_cbar(scheme, c);
  p.n = n;
  return p;
}

std::vector<real> magnus_coefficients_dp(double c, int order) {
  require(order >= 0, ErrorCode::argument, "magnus_coefficients_dp: negative order");
  const real two_c = 2.0L * c;
  // inner[q][d]: sum over compositions j of q with d parts of prod 1/j_l.
  std::vector<std::vector<real>> inner(order + 1, std::vector<real>(order + 1, 0.0L));
  inner[0][0] = 1.0L;
  for (int d = 1; d <= order; ++d)
    for (int q = d; q <= order; ++q) {
      real acc = 0.0L;
      for (int j = 1; j <= q - d + 1; ++j) acc += inner[q - j][d - 1] / j;
      inner[q][d] = acc;
    }
  std::vector<real> f(order + 1, 0.0L);
  for (int q = 1; q <= order; ++q) {
    real pow = 1.0L;
    for (int d = 1; d <= q; ++d) {
      pow *= two_c;
      f[q] += pow / d * inner[q][d];
    }
  }
  // outer[p][z]: sum over compositions k of p with z parts of prod f(k_l).
  std::vector<real> coeff(order + 1, 0.0L);
  std::vector<real> prev(order + 1, 0.0L), next(order + 1, 0.0L);
  prev[0] = 1.0L;
  coeff[0] = 1.0L;
  real inv_fact = 1.0L;
  for (int z = 1; z <= order; ++z) {
    inv_fact /= z;
    std::fill(next.begin(), next.end(), 0.0L);
    for (int p = z; p <= order; ++p) {
      real acc = 0.0L;
      for (int k = 1; k <= p - z + 1; ++k) acc += f[k] * prev[p - k];
      next[p] = acc;
      coeff[p] += inv_fact * acc;
    }
    std::swap(prev, next);
  }
  return coeff;
}

std::vector<real> magnus_coefficients_gf(double c, int order) {
  PowerSeries h = series_neg_log_one_minus(PowerSeries::identity(order)) * (2.0L * c);
  PowerSeries g = series_neg_log_one_minus(h);
  return series_exp(g).coeffs();
}

bool magnus_guard(double c, double h) {
  if (!(h > 0.0) || h >= 2.0) return false;
  return 2.0 * c * -std::log1p(-h / 2.0) < 1.0;
}

double magnus_remainder(double c, double h, int s, double rel_tol) {
  require(c > 0.0 && s >= 1 && rel_tol > 0.0, ErrorCode::argument, "magnus_remainder: bad arguments");
  require(magnus_guard(c, h), ErrorCode::divergent_regime,
          "magnus_remainder: 2c(-ln(1-h/2)) >= 1 at c=" + fmt_num(c) + ", h=" + fmt_num(h) + "; shrink h");
  const real x = h / 2.0L;
  auto term = [&](int p) {
    const auto& coeff = magnus_table(c, p);
    return coeff[p] * std::pow(x, static_cast<real>(p));
  };
  return static_cast<double>(sum_tail(term, 2 * s + 1, kMagnusOrderCap, rel_tol, "magnus_remainder"));
}

double magnus_remainder_to_order(double c, double h, int s, int max_order) {
  require(magnus_guard(c, h), ErrorCode::divergent_regime, "magnus_remainder: guard violated");
  const auto& coeff = magnus_table(c, max_order);
  real sum = 0.0L;
  for (int p = 2 * s + 1; p <= max_order; ++p) sum += coeff[p] * std::pow(h / 2.0L, static_cast<real>(p));
  return static_cast<double>(sum);
}

real cfqm_term(double cbar, double h, int m, int p) {
  const real a = static_cast<real>(cbar) * m;
  real binom = 1.0L;  // binom(p-1, z-1)
  real pow_over_fact = 1.0L;
  real acc = 0.0L;
  for (int z = 1; z <= p; ++z) {
    if (z > 1) binom = binom * (p - z + 1) / (z - 1);
    pow_over_fact *= a / z;
    acc += binom * pow_over_fact;
  }
  return std::pow(static_cast<real>(h), static_cast<real>(p)) * acc;
}

real cfqm_term_by_counts(double cbar, double h, int m, int p) {
  require(p <= kCountTableOrder, ErrorCode::argument, "cfqm_term_by_counts: p too large");
  const auto& counts = count_table();
  const auto& weak = weak_table(m);
  real acc = 0.0L;
  real pow = 1.0L;
  for (int z = 1; z <= p; ++z) {
    pow *= cbar;
    acc += counts[p][z] * pow * weak[z];
  }
  return std::pow(static_cast<real>(h), static_cast<real>(p)) * acc;
}

double cfqm_remainder(double cbar, double h, int s, int m, double rel_tol) {
  require(cbar >= 0.0 && s >= 1 && m >= 1 && rel_tol > 0.0, ErrorCode::argument,
          "cfqm_remainder: bad arguments");
  if (s == 1) return 0.0;
  require(h > 0.0 && h < 1.0, ErrorCode::divergent_regime,
          "cfqm_remainder: requires h < 1, got h=" + fmt_num(h) + "; shrink h");
  auto term = [&](int p) {
    real t = cfqm_term(cbar, h, m, p);
    if (p <= kCountTableOrder && !close_rel(t, cfqm_term_by_counts(cbar, h, m, p), 1e-10L)) {
      fail(ErrorCode::internal, "cfqm term mismatch at p=" + std::to_string(p));
    }
    return t;
  };
  return static_cast<double>(sum_tail(term, 2 * s + 1, kCfqmOrderCap, rel_tol, "cfqm_remainder"));
}

double cfqm_remainder_to_order(double cbar, double h, int s, int m, int max_order) {
  if (s == 1) return 0.0;
  real sum = 0.0L;
  for (int p = 2 * s + 1; p <= max_order; ++p) sum += cfqm_term(cbar, h, m, p);
  return static_cast<double>(sum);
}

double quadrature_inner_tail(double c, double h, int s) {
  require(h < 2.0, ErrorCode::divergent_tail, "quadrature tail requires h < 2, got h=" + fmt_num(h));
  return static_cast<double>(c * factorial(2 * s) / std::pow(1.0L - h / 2.0L, 2 * s + 1));
}

double quadrature_inner_tail_direct(double c, double h, int s, double tol) {
  require(h < 2.0, ErrorCode::divergent_tail, "quadrature tail requires h < 2, got h=" + fmt_num(h));
  const real x = h / 2.0L;
  real t = factorial(2 * s) * c;
  real sum = t;
  for (long j = 0; j < 100000000L; ++j) {
    real ratio = (j + 1 + 2 * s) * x / (j + 1);
    t *= ratio;
    sum += t;
    if (ratio < 1.0L && t <= tol * sum) return static_cast<double>(sum);
    if (t == 0.0L) return static_cast<double>(sum);
  }
  fail(ErrorCode::divergent_tail, "quadrature tail: direct sum did not converge");
}

double quadrature_remainder(const RealMatrix& y, double c, double h, int s) {
  require(h > 0.0, ErrorCode::argument, "quadrature_remainder: h must be positive");
  require(h < 2.0, ErrorCode::divergent_tail, "quadrature_remainder: requires h < 2, got h=" + fmt_num(h));
  require(y.cols() == s, ErrorCode::argument, "quadrature_remainder: y must have s columns");
  const double closed = quadrature_inner_tail(c, h, s);
  const double direct = quadrature_inner_tail_direct(c, h, s);
  if (!close_rel(closed, direct, 1e-10L)) {
    fail(ErrorCode::internal, "quadrature tail closed form disagrees with direct sum");
  }
  const real fs = factorial(s);
  const real f2s = factorial(2 * s);
  const real pre = std::pow(static_cast<real>(h), static_cast<real>(2 * s + 1)) * fs * fs * fs * fs /
                   ((2 * s + 1) * f2s * f2s * f2s);
  real weight = 0.0L;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (int g = 0; g < s; ++g) weight += std::fabs(y(i, g)) / std::pow(static_cast<real>(h), static_cast<real>(g));
  return static_cast<double>(pre * weight * closed);
}

double trotter_constant(int n, int s) {
  int stages = 2;
  for (int k = 1; k < s; ++k) stages *= 5;
  real sum = 0.0L;
  for (int k = 1; k <= stages; ++k) {
    sum += static_cast<real>(n) * std::pow(2.0L * k - 1, 2 * s) * k * std::pow(4.0L * k - 4, 2 * s);
    sum += static_cast<real>(n) * std::pow(2.0L * k + 1, 2 * s) * k * std::pow(4.0L * k, 2 * s);
  }
  return static_cast<double>(sum);
}

double trotter_step_error(const RealMatrix& z, int n, double h, int s) {
  require(n >= 2, ErrorCode::argument, "trotter_step_error: n must be >= 2");
  require(z.cols() == s, ErrorCode::argument, "trotter_step_error: z must have s columns");
  const real k_const = trotter_constant(n, s);
  const real inv_fact = 1.0L / factorial(2 * s + 1);
  real total = 0.0L;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    real zi = 0.0L;
    for (int k = 0; k < s; ++k) zi += std::fabs(z(i, k));
    zi /= 4.0L * n;
    total += k_const * std::pow(zi * h, static_cast<real>(2 * s + 1)) * inv_fact;
  }
  return static_cast<double>(total);
}

ErrorBreakdown step_error(const CFQMScheme& scheme, const BoundParams& params, double rel_tol) {
  require(params.s == scheme.s && params.m == scheme.m, ErrorCode::argument,
          "step_error: params (s, m) do not match scheme " + scheme.id);
  ErrorBreakdown b;
  b.magnus_taylor = magnus_remainder(params.c, params.h, params.s, rel_tol);
  b.cfqm_taylor = cfqm_remainder(params.cbar, params.h, params.s, params.m, rel_tol);
  b.quadrature = quadrature_remainder(scheme.y, params.c, params.h, params.s);
  b.trotter = scheme.is_split() ? 0.0 : trotter_step_error(scheme.z, params.n, params.h, params.s);
  return b;
}

bool step_guards_hold(const CFQMScheme& scheme, double c, double h) {
  if (!magnus_guard(c, h)) return false;
  if (scheme.s > 1 && h >= 1.0) return false;
  return h < 2.0;
}

bool suzuki_valid(double lam, double h, int s, double eps_step) {
  const double limit = 0.9 * std::pow(5.0 / 3.0, s) * lam * h;
  return eps_step <= limit * (1.0 + 1e-12);
}

std::int64_t suzuki_step_cost(int q, double lam, double h, int s, double eps_step) {
  require(q >= 1 && lam > 0.0 && h > 0.0 && s >= 1 && eps_step > 0.0, ErrorCode::argument,
          "suzuki_step_cost: bad arguments");
  require(suzuki_valid(lam, h, s, eps_step), ErrorCode::epsilon_too_large,
          "suzuki_step_cost: eps_step exceeds 0.9 (5/3)^s lam h; shrink h or treat Suzuki as inapplicable");
  const long double n = 3.0L * q * lam * h * s * std::pow(25.0L / 3.0L, s) *
                        std::pow(static_cast<long double>(lam) * h / eps_step, 1.0L / (2 * s));
  return static_cast<std::int64_t>(std::ceil(n - 1e-12L * n));
}

}  // namespace cfqm
