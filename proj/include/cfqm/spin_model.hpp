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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cfqm {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxDenseSpins = 12;

/// Hermitian matrix with its hermiticity checked at construction.
class DenseHermitian {
 public:
  DenseHermitian() = default;
  explicit DenseHermitian(ComplexMatrix m, double rel_tol = 1e-13);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Open Heisenberg chain with cosine fields, normalized by 1/(4n):
/// H(t) = (1/4n) [sum_i s_i . s_{i+1} + sum_i cos(phi_i + omega_i t) Z_i].
/// Site 1 is the most significant qubit.
struct HeisenbergModel {
  int n = 0;
  std::vector<double> phases;
  std::vector<double> freqs;

  void validate() const;
};

HeisenbergModel random_model(int n, std::uint64_t seed);

/// Model with every frequency zero, so H does not depend on t.
HeisenbergModel static_model(int n, std::uint64_t seed);

std::string format_model(const HeisenbergModel& model);
HeisenbergModel parse_model(const std::string& text);

enum class Parity { odd, even };

/// One fast-forwardable block: a one- or two-site operator on consecutive
/// sites starting at first_site (0-based).
struct LocalTerm {
  int first_site = 0;
  int sites = 1;
  Eigen::Matrix4cd op;  // top-left 2x2 used when sites == 1
};

/// Terms of the given parity class at time t, already scaled by 1/(4n).
/// Each term acts on a disjoint set of sites.
std::vector<LocalTerm> parity_terms(const HeisenbergModel& model, double t, Parity parity);

/// Embeds local terms into the full 2^n space.
ComplexMatrix embed(const std::vector<LocalTerm>& terms, int n);

DenseHermitian hamiltonian_at(const HeisenbergModel& model, double t);

std::pair<DenseHermitian, DenseHermitian> split_at(const HeisenbergModel& model, double t);

/// Time-independent nearest-neighbor coupling part, scaled by 1/(4n).
DenseHermitian coupling_part(const HeisenbergModel& model);

/// Diagonal field part at t, scaled by 1/(4n).
Eigen::VectorXd field_diagonal(const HeisenbergModel& model, double t);

struct TaylorBound {
  double c = 1.0;
  bool warning = false;
};

/// c = 1 whenever every |omega_i| <= 1; otherwise max(1, omega_max) with a
/// warning.
TaylorBound taylor_bound_c(const HeisenbergModel& model);

}  // namespace cfqm
