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
#include <functional>
#include <initializer_list>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cfqm {

using real = long double;
using rational = boost::multiprecision::cpp_rational;

struct Composition {
  std::vector<int> parts;

  int dim() const { return static_cast<int>(parts.size()); }
  int total() const;
};

/// All 2^(p-1) compositions of p, largest first part first. Results are
/// memoized; p is capped at kMaxEnumeratedCompositions.
const std::vector<Composition>& compositions(int p);

inline constexpr int kMaxEnumeratedCompositions = 22;

/// Visits compositions of p in the same order as compositions(p) without
/// storing them. Usable for any p, iterative.
void for_each_composition(int p, const std::function<void(const std::vector<int>&)>& visit);

/// Number of compositions of p with exactly z parts, binom(p-1, z-1).
real composition_count(int p, int z);

/// Sum over k_1+...+k_m = d of 1/(k_1!...k_m!), evaluated exactly by
/// dynamic programming over the number of parts.
rational weak_composition_factorial_sum_exact(int d, int m);

/// Floating point version for arbitrary d.
real weak_composition_factorial_sum(int d, int m);

class PowerSeries {
 public:
  explicit PowerSeries(int order);
  PowerSeries(std::initializer_list<real> coeffs, int order);

  /// The series x truncated at the given order.
  static PowerSeries identity(int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  real operator[](int k) const { return k <= order() ? coeffs_[k] : 0.0L; }
  real& operator[](int k) { return coeffs_.at(k); }
  const std::vector<real>& coeffs() const { return coeffs_; }

  PowerSeries operator+(const PowerSeries& other) const;
  PowerSeries operator-(const PowerSeries& other) const;
  PowerSeries operator*(const PowerSeries& other) const;
  PowerSeries operator*(real scalar) const;

  /// 1/S by long division; requires a nonzero constant term.
  PowerSeries reciprocal() const;

  /// Evaluates the truncated polynomial at x.
  real evaluate(real x) const;

 private:
  std::vector<real> coeffs_;
};

PowerSeries series_exp(const PowerSeries& s);
PowerSeries series_neg_log_one_minus(const PowerSeries& s);

}  // namespace cfqm
