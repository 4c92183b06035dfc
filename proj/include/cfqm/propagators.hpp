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

#include <functional>
#include <string>
#include <vector>

#include "cfqm/schemes.hpp"
#include "cfqm/spin_model.hpp"

namespace cfqm {

using Unitary = ComplexMatrix;

/// exp(-i tau H) by Hermitian eigendecomposition.
Unitary expm_antihermitian(const DenseHermitian& h, double tau);

/// exp(-i tau diag(d)).
Unitary expm_diagonal(const Eigen::VectorXd& d, double tau);

/// Largest singular value of u - v.
double spectral_distance(const Unitary& u, const Unitary& v);

/// One stage applies exp(-i xi t B) and then exp(-i beta t C) to the state,
/// i.e. the operator exp(-i beta t C) exp(-i xi t B).
struct ProductFormulaStage {
  double xi = 0.0;
  double beta = 0.0;
};

struct ProductFormulaSpec {
  int p = 2;
  std::vector<ProductFormulaStage> stages;  // first entry acts first

  int stage_count() const { return static_cast<int>(stages.size()); }
};

/// Order-2s Trotter-Suzuki formula with 2 * 5^(s-1) stages.
ProductFormulaSpec make_suzuki(int s);

/// Applies the formula to exp(-i (B + C)) with B and C given as local
/// terms of disjoint support within each family.
Unitary apply_product_formula(const ProductFormulaSpec& pf, const std::vector<LocalTerm>& b,
                              const std::vector<LocalTerm>& c, int n);

/// exp of a sum of disjoint-support local terms, assembled block by block.
Unitary expm_local_terms(const std::vector<LocalTerm>& terms, double tau, int n);

Unitary cfqm_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h);

Unitary trotterized_cfqm_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h,
                              const ProductFormulaSpec& pf);

/// Generic split step: coupling(t) and field(t) must each commute with
/// themselves at different times.
using HermitianFn = std::function<DenseHermitian(double)>;
Unitary split_step(const CFQMScheme& scheme, const HermitianFn& coupling, const HermitianFn& field, double t0,
                   double h);

Unitary split_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h);

/// N exponential-midpoint micro-steps.
Unitary midpoint_propagator(const HeisenbergModel& model, double t0, double t1, int steps);

struct ReferenceResult {
  Unitary u;
  int micro_steps = 0;
  double estimate = 0.0;  // last refinement difference
};

/// Midpoint micro-steps with mesh halving and Richardson extrapolation until
/// consecutive extrapolants differ by less than tol.
ReferenceResult reference_propagator_info(const HeisenbergModel& model, double t0, double t1, double tol);

Unitary reference_propagator(const HeisenbergModel& model, double t0, double t1, double tol = 1e-12);

enum class Method { midpoint, cfqm, trotterized_cfqm, split };

Method parse_method(const std::string& name);

Unitary evolve(Method method, const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double t_total,
               int steps);

}  // namespace cfqm
