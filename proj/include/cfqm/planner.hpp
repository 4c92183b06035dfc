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
#include <optional>
#include <string>
#include <vector>

#include "cfqm/bounds.hpp"
#include "cfqm/schemes.hpp"

namespace cfqm {

struct ModelBounds {
  double c = 1.0;
  int n = 2;
};

/// Fast-forwardable exponentials for r steps: r m 2 stages for Trotterized
/// non-split schemes, r 2 m_s for split schemes.
std::int64_t exponential_count(const CFQMScheme& scheme, std::int64_t r);

struct SuzukiPlan {
  int s = 1;
  std::int64_t r = 0;
  double h = 0.0;
  std::int64_t exponentials = 0;
  bool feasible = false;
};

/// Smallest r (doubling) for which the per-step validity condition holds
/// with eps/r, then r times the per-step cost.
SuzukiPlan plan_suzuki(int s, double t_total, double epsilon, double lam = 1.0, int q = 2);

struct Plan {
  std::string scheme_id;
  double t_total = 0.0;
  int n = 0;
  double epsilon = 0.0;
  double h = 0.0;
  std::int64_t r = 0;
  std::int64_t exponentials = 0;
  ErrorBreakdown breakdown;
  std::optional<std::int64_t> suzuki_exponentials;
};

inline constexpr std::int64_t kMaxSteps = std::int64_t{1} << 32;

/// Minimal r with r * step_error(T / r).total <= epsilon, searched by
/// doubling then bisection.
Plan plan(const CFQMScheme& scheme, const ModelBounds& bounds, double t_total, double epsilon,
          double rel_tol = kDefaultRelTol);

enum class SweepAxis { time, error, spins };

SweepAxis parse_axis(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::time;
  std::vector<double> grid;
  std::optional<double> t_total;  // spins axis defaults to T = n
  int n = 128;
  double epsilon = 1e-3;
  double c = 1.0;
  std::vector<std::string> schemes;  // bundled ids or Suzuki-<order>
  double rel_tol = kDefaultRelTol;
};

/// One CSV row per (scheme, grid point), grid order within scheme order.
std::string sweep_csv(const SweepSpec& spec);

/// Order 2s of a "Suzuki-<order>" pseudo-scheme id, if it is one.
std::optional<int> suzuki_half_order(const std::string& id);

struct ValidationRow {
  double t0 = 0.0;
  double h = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double trotter_defect = 0.0;
  double trotter_bound = 0.0;
  std::string status;  // ok, violation, outside-guard, oracle-failure
};

struct ValidationSpec {
  std::uint64_t seed = 1;
  int n = 6;
  int samples = 50;
  double h_min = 0.05;
  double h_max = 0.75;
  double ref_tol = 1e-12;
  double rel_tol = kDefaultRelTol;
  bool check_trotter = true;
};

struct ValidationReport {
  std::string scheme_id;
  std::vector<ValidationRow> rows;

  bool passed() const;
  int violations() const;
};

ValidationReport validate(const CFQMScheme& scheme, const ValidationSpec& spec);

std::string validation_csv(const ValidationReport& report);

}  // namespace cfqm
