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

#include "cfqm/series.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "cfqm/errors.hpp"

namespace cfqm {

int Composition::total() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

void for_each_composition(int p, const std::function<void(const std::vector<int>&)>& visit) {
  require(p >= 0, ErrorCode::argument, "compositions: p must be nonnegative, got " + std::to_string(p));
  if (p == 0) {
    visit({});
    return;
  }
  std::vector<int> parts{p};
  parts.reserve(p);
  while (true) {
    visit(parts);
    // Next in descending lexicographic order: lower the rightmost part above
    // one and collapse everything after it into a single part.
    int i = static_cast<int>(parts.size()) - 1;
    while (i >= 0 && parts[i] == 1) --i;
    if (i < 0) return;
    int rest = static_cast<int>(parts.size()) - 1 - i;
    parts[i] -= 1;
    parts.resize(i + 1);
    parts.push_back(rest + 1);
  }
}

const std::vector<Composition>& compositions(int p) {
  require(p >= 0, ErrorCode::argument, "compositions: p must be nonnegative, got " + std::to_string(p));
  require(p <= kMaxEnumeratedCompositions, ErrorCode::resource,
          "compositions: p=" + std::to_string(p) + " exceeds enumeration cap " +
              std::to_string(kMaxEnumeratedCompositions) + "; use for_each_composition");
  static std::mutex mu;
  static std::map<int, std::vector<Composition>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(p);
  if (it != memo.end()) return it->second;
  std::vector<Composition> out;
  out.reserve(p == 0 ? 1 : std::size_t{1} << (p - 1));
  for_each_composition(p, [&](const std::vector<int>& parts) { out.push_back(Composition{parts}); });
  return memo.emplace(p, std::move(out)).first->second;
}

real composition_count(int p, int z) {
  require(p >= 0 && z >= 0, ErrorCode::argument, "composition_count: negative argument");
  // counts[q][d]: compositions of q into d parts, built part by part.
  std::vector<std::vector<real>> counts(p + 1, std::vector<real>(z + 1, 0.0L));
  counts[0][0] = 1.0L;
  for (int d = 1; d <= z; ++d)
    for (int q = 1; q <= p; ++q)
      for (int j = 1; j <= q; ++j) counts[q][d] += counts[q - j][d - 1];
  return counts[p][z];
}

rational weak_composition_factorial_sum_exact(int d, int m) {
  require(d >= 0, ErrorCode::argument, "weak_composition_factorial_sum: d must be >= 0");
  require(m >= 1, ErrorCode::argument, "weak_composition_factorial_sum: m must be >= 1");
  std::vector<rational> inv_fact(d + 1);
  inv_fact[0] = 1;
  for (int k = 1; k <= d; ++k) inv_fact[k] = inv_fact[k - 1] / k;
  // w[q] holds the sum over weak compositions of q into the parts seen so far.
  std::vector<rational> w(inv_fact);
  for (int part = 2; part <= m; ++part) {
    std::vector<rational> next(d + 1);
    for (int q = 0; q <= d; ++q)
      for (int k = 0; k <= q; ++k) next[q] += w[q - k] * inv_fact[k];
    w = std::move(next);
  }
  return w[d];
}

real weak_composition_factorial_sum(int d, int m) {
  require(d >= 0, ErrorCode::argument, "weak_composition_factorial_sum: d must be >= 0");
  require(m >= 1, ErrorCode::argument, "weak_composition_factorial_sum: m must be >= 1");
  std::vector<real> inv_fact(d + 1);
  inv_fact[0] = 1.0L;
  for (int k = 1; k <= d; ++k) inv_fact[k] = inv_fact[k - 1] / k;
  std::vector<real> w(inv_fact);
  for (int part = 2; part <= m; ++part) {
    std::vector<real> next(d + 1, 0.0L);
    for (int q = 0; q <= d; ++q)
      for (int k = 0; k <= q; ++k) next[q] += w[q - k] * inv_fact[k];
    w = std::move(next);
  }
  return w[d];
}

PowerSeries::PowerSeries(int order) {
  require(order >= 0, ErrorCode::argument, "PowerSeries: order must be >= 0");
  coeffs_.assign(order + 1, 0.0L);
}

PowerSeries::PowerSeries(std::initializer_list<real> coeffs, int order) : PowerSeries(order) {
  int k = 0;
  for (real c : coeffs) {
    if (k > order) break;
    coeffs_[k++] = c;
  }
}

PowerSeries PowerSeries::identity(int order) {
  PowerSeries x(order);
  if (order >= 1) x[1] = 1.0L;
  return x;
}

PowerSeries PowerSeries::operator+(const PowerSeries& other) const {
  PowerSeries out(std::min(order(), other.order()));
  for (int k = 0; k <= out.order(); ++k) out[k] = coeffs_[k] + other.coeffs_[k];
  return out;
}

PowerSeries PowerSeries::operator-(const PowerSeries& other) const {
  return *this + other * -1.0L;
}

PowerSeries PowerSeries::operator*(const PowerSeries& other) const {
  PowerSeries out(std::min(order(), other.order()));
  for (int k = 0; k <= out.order(); ++k) {
    real acc = 0.0L;
    for (int j = 0; j <= k; ++j) acc += coeffs_[j] * other.coeffs_[k - j];
    out[k] = acc;
  }
  return out;
}

PowerSeries PowerSeries::operator*(real scalar) const {
  PowerSeries out(*this);
  for (real& c : out.coeffs_) c *= scalar;
  return out;
}

PowerSeries PowerSeries::reciprocal() const {
  require(coeffs_[0] != 0.0L, ErrorCode::argument, "PowerSeries::reciprocal: zero constant term");
  PowerSeries out(order());
  out[0] = 1.0L / coeffs_[0];
  for (int k = 1; k <= order(); ++k) {
    real acc = 0.0L;
    for (int j = 1; j <= k; ++j) acc += coeffs_[j] * out[k - j];
    out[k] = -acc / coeffs_[0];
  }
  return out;
}

real PowerSeries::evaluate(real x) const {
  real acc = 0.0L;
  for (int k = order(); k >= 0; --k) acc = acc * x + coeffs_[k];
  return acc;
}

PowerSeries series_exp(const PowerSeries& s) {
  require(s[0] == 0.0L, ErrorCode::argument, "series_exp: constant term must be zero");
  const int n = s.order();
  PowerSeries e(n);
  e[0] = 1.0L;
  // E' = S'E gives k e_k = sum_j j s_j e_{k-j}.
  for (int k = 1; k <= n; ++k) {
    real acc = 0.0L;
    for (int j = 1; j <= k; ++j) acc += j * s[j] * e[k - j];
    e[k] = acc / k;
  }
  return e;
}

PowerSeries series_neg_log_one_minus(const PowerSeries& s) {
  require(s[0] == 0.0L, ErrorCode::argument, "series_neg_log_one_minus: constant term must be zero");
  const int n = s.order();
  PowerSeries one_minus = PowerSeries({1.0L}, n) - s;
  PowerSeries inv = one_minus.reciprocal();
  // L' = S'/(1 - S), integrated term by term.
  PowerSeries ds(n);
  for (int k = 1; k <= n; ++k) ds[k - 1] = k * s[k];
  PowerSeries dl = ds * inv;
  PowerSeries out(n);
  for (int k = 1; k <= n; ++k) out[k] = dl[k - 1] / k;
  return out;
}

}  // namespace cfqm
