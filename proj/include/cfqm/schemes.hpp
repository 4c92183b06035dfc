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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cfqm {

using RealMatrix = Eigen::MatrixXd;

enum class SchemeKind { non_split, split };

/// Basis-change matrices for half-order s. Q carries the 1/2^(g+1) scaling
/// so that z = y * Q maps univariate-integral coefficients to node weights.
struct TransformMatrices {
  int s = 0;
  RealMatrix T;  // T(g, j-1) for g = 0..s-1, j = 1..s
  RealMatrix R;  // inverse of T
  RealMatrix Q;  // Q(g, k) = w_k c_k^g / 2^(g+1)
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct GaussLegendre {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // positive, summing to 2
};

/// Gauss-Legendre rule on [-1, 1] with s points, 1 <= s <= 6.
GaussLegendre gauss_legendre(int s);

/// T(g, j-1) = (1 - (-1)^(g+j)) / ((g+j) 2^(g+j)) for g < s, j = 1..jmax.
RealMatrix t_matrix(int s, int jmax);

/// Memoized; safe for concurrent callers.
const TransformMatrices& transform_matrices(int s);

RealMatrix z_from_y(const RealMatrix& y);

/// xbar_{i,j} = sum_g y(i, g) T(g, j-1); defined for every j >= 1.
double xbar(const RealMatrix& y, int i, int j);

std::pair<RealMatrix, RealMatrix> split_maps(const RealMatrix& a_mat, const RealMatrix& b_mat, int s);

struct CFQMScheme {
  std::string id;
  int s = 0;
  int m = 0;       // exponentials per step before any Trotter splitting
  int stages = 0;  // rows per family: m for non-split, m_s for split
  SchemeKind kind = SchemeKind::non_split;
  // One row per exponential in product order (row 0 is leftmost). For split
  // schemes rows alternate coupling, field, coupling, field, ...
  RealMatrix y;
  RealMatrix z;
  std::vector<double> nodes;
  std::vector<double> weights;
  RealMatrix rho;    // split only, stages x s
  RealMatrix sigma;  // split only, stages x s

  bool is_split() const { return kind == SchemeKind::split; }
  /// Coefficients in the graded basis, x = y * T.
  RealMatrix x() const;
};

/// c * max |xbar_{i,j}|, scanning j up to 4s and beyond until the 2^(-j)
/// tail bound cannot exceed the running maximum.
double compute_cbar(const CFQMScheme& scheme, double c);

/// Parses the scheme text format. Checks shape, time antisymmetry and any
/// listed z rows; does not run the numerical order check.
CFQMScheme parse_scheme(const std::string& text, const std::string& source = "<memory>");

/// Throws data-integrity if x = y * T is not time antisymmetric to tol.
void check_time_antisymmetry(const CFQMScheme& scheme, double tol = 1e-10);

std::vector<std::string> bundled_scheme_ids();

/// Directory holding <id>.txt; CFQM_SCHEME_DIR overrides the built-in path.
std::filesystem::path scheme_directory();

/// Loads, validates and order-checks a bundled scheme. Memoized by id.
const CFQMScheme& load_scheme(const std::string& id);

/// Loads and validates a scheme file, including the order check.
CFQMScheme load_scheme_file(const std::filesystem::path& path);

struct HeisenbergModel;

struct OrderReport {
  std::vector<double> h_grid;
  std::vector<double> errors;
  double slope = 0.0;
  double expected = 0.0;
  bool accepted = false;
};

inline constexpr double kOrderErrorFloor = 1e-11;

/// One step with exact exponentials against the reference propagator at each
/// h; least-squares slope of log error against log h.
OrderReport verify_order(const CFQMScheme& scheme, const HeisenbergModel& model,
                         const std::vector<double>& h_grid, double ref_tol = 1e-12);

/// Grid used when a scheme is loaded: geometric, chosen per order so errors
/// stay above the floor on the small check model.
std::vector<double> default_order_grid(int s);

}  // namespace cfqm
