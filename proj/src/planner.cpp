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

#include "cfqm/planner.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "cfqm/errors.hpp"
#include "cfqm/propagators.hpp"
#include "cfqm/spin_model.hpp"

namespace cfqm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Probe {
  bool guards = false;
  bool ok = false;
  ErrorBreakdown breakdown;
};

}  // namespace

std::int64_t exponential_count(const CFQMScheme& scheme, std::int64_t r) {
  if (scheme.is_split()) return r * scheme.m;
  std::int64_t stages = 2;
  for (int k = 1; k < scheme.s; ++k) stages *= 5;
  return r * scheme.m * 2 * stages;
}

SuzukiPlan plan_suzuki(int s, double t_total, double epsilon, double lam, int q) {
  require(t_total > 0.0 && epsilon > 0.0, ErrorCode::argument, "plan_suzuki: T and epsilon must be positive");
  SuzukiPlan out;
  out.s = s;
  for (std::int64_t r = 1; r <= kMaxSteps; r *= 2) {
    const double h = t_total / static_cast<double>(r);
    const double eps_step = epsilon / static_cast<double>(r);
    if (!suzuki_valid(lam, h, s, eps_step)) continue;
    out.r = r;
    out.h = h;
    out.exponentials = r * suzuki_step_cost(q, lam, h, s, eps_step);
    out.feasible = true;
    return out;
  }
  return out;
}

Plan plan(const CFQMScheme& scheme, const ModelBounds& bounds, double t_total, double epsilon, double rel_tol) {
  require(epsilon > 0.0, ErrorCode::argument, "plan: epsilon must be positive");
  require(t_total > 0.0, ErrorCode::argument, "plan: T must be positive");
  const double cbar = compute_cbar(scheme, bounds.c);
  auto probe = [&](std::int64_t r) {
    Probe p;
    const double h = t_total / static_cast<double>(r);
    if (!step_guards_hold(scheme, bounds.c, h)) return p;
    p.guards = true;
    BoundParams params{bounds.c, h, scheme.s, scheme.m, cbar, bounds.n};
    try {
      p.breakdown = step_error(scheme, params, rel_tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::divergent_regime) throw;
      return p;
    }
    p.ok = static_cast<double>(r) * p.breakdown.total() <= epsilon;
    return p;
  };
  bool any_guard = false;
  std::int64_t hi = 0;
  for (std::int64_t r = 1; r <= kMaxSteps; r *= 2) {
    const Probe p = probe(r);
    any_guard = any_guard || p.guards;
    if (p.ok) {
      hi = r;
      break;
    }
  }
  if (hi == 0) {
    require(any_guard, ErrorCode::divergent_regime, "plan: convergence guards fail at every tested step size");
    fail(ErrorCode::infeasible, "plan: no step count up to 2^32 meets epsilon for " + scheme.id);
  }
  std::int64_t lo = hi / 2;  // infeasible, or zero
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (probe(mid).ok) hi = mid;
    else lo = mid;
  }
  const Probe best = probe(hi);
  require(best.ok, ErrorCode::internal, "plan: chosen step count fails the post-hoc check");
  Plan out;
  out.scheme_id = scheme.id;
  out.t_total = t_total;
  out.n = bounds.n;
  out.epsilon = epsilon;
  out.r = hi;
  out.h = t_total / static_cast<double>(hi);
  out.exponentials = exponential_count(scheme, hi);
  out.breakdown = best.breakdown;
  const SuzukiPlan suzuki = plan_suzuki(scheme.s, t_total, epsilon, bounds.c);
  if (suzuki.feasible) out.suzuki_exponentials = suzuki.exponentials;
  return out;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "time") return SweepAxis::time;
  if (name == "error") return SweepAxis::error;
  if (name == "spins") return SweepAxis::spins;
  fail(ErrorCode::argument, "unknown sweep axis '" + name + "' (expected time, error or spins)");
}

std::optional<int> suzuki_half_order(const std::string& id) {
  const std::string prefix = "Suzuki-";
  if (id.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = id.substr(prefix.size());
  if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  const int order = std::stoi(rest);
  if (order < 2 || order % 2 != 0) return std::nullopt;
  return order / 2;
}

std::string sweep_csv(const SweepSpec& spec) {
  require(!spec.grid.empty(), ErrorCode::argument, "sweep: grid must not be empty");
  require(!spec.schemes.empty(), ErrorCode::argument, "sweep: need at least one scheme");
  std::ostringstream os;
  os << "scheme_id,axis_value,h,r,exponentials,magnus_taylor,cfqm_taylor,quadrature,trotter,status\n";
  for (const auto& id : spec.schemes) {
    const auto suzuki = suzuki_half_order(id);
    const CFQMScheme* scheme = suzuki ? nullptr : &load_scheme(id);
    for (double value : spec.grid) {
      double t_total = spec.t_total.value_or(0.0);
      double eps = spec.epsilon;
      int n = spec.n;
      switch (spec.axis) {
        case SweepAxis::time: t_total = value; break;
        case SweepAxis::error: eps = value; break;
        case SweepAxis::spins:
          n = static_cast<int>(std::lround(value));
          require(n >= 2 && std::fabs(value - n) < 1e-9, ErrorCode::argument, "sweep: spins must be integers >= 2");
          if (!spec.t_total) t_total = n;
          break;
      }
      require(t_total > 0.0, ErrorCode::argument, "sweep: --time is required for this axis");
      os << id << ',' << num(value) << ',';
      if (suzuki) {
        const SuzukiPlan sp = plan_suzuki(*suzuki, t_total, eps, spec.c);
        if (sp.feasible) {
          os << num(sp.h) << ',' << sp.r << ',' << sp.exponentials << ",,,,,ok\n";
        } else {
          os << ",,,,,,,epsilon-too-large\n";
        }
        continue;
      }
      try {
        const Plan p = plan(*scheme, ModelBounds{spec.c, n}, t_total, eps, spec.rel_tol);
        os << num(p.h) << ',' << p.r << ',' << p.exponentials << ',' << num(p.breakdown.magnus_taylor) << ','
           << num(p.breakdown.cfqm_taylor) << ',' << num(p.breakdown.quadrature) << ','
           << num(p.breakdown.trotter) << ",ok\n";
      } catch (const Error& e) {
        os << ",,,,,,," << code_name(e.code()) << "\n";
      }
    }
  }
  return os.str();
}

bool ValidationReport::passed() const { return violations() == 0; }

int ValidationReport::violations() const {
  int count = 0;
  for (const auto& row : rows)
    if (row.status == "violation") ++count;
  return count;
}

ValidationReport validate(const CFQMScheme& scheme, const ValidationSpec& spec) {
  require(spec.n >= 2 && spec.n <= 8, ErrorCode::argument, "validate: n must be in 2..8");
  require(spec.samples >= 1, ErrorCode::argument, "validate: samples must be >= 1");
  require(spec.h_min > 0.0 && spec.h_max >= spec.h_min, ErrorCode::argument, "validate: bad step-size range");
  const HeisenbergModel model = random_model(spec.n, spec.seed);
  const double c = taylor_bound_c(model).c;
  const double cbar = compute_cbar(scheme, c);
  const ProductFormulaSpec pf = make_suzuki(scheme.s);
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  ValidationReport report;
  report.scheme_id = scheme.id;
  for (int k = 0; k < spec.samples; ++k) {
    ValidationRow row;
    row.t0 = 10.0 * unit_uniform(rng);
    row.h = spec.h_min * std::pow(spec.h_max / spec.h_min, unit_uniform(rng));
    if (!step_guards_hold(scheme, c, row.h)) {
      row.status = "outside-guard";
      report.rows.push_back(row);
      continue;
    }
    try {
      BoundParams params{c, row.h, scheme.s, scheme.m, cbar, model.n};
      const ErrorBreakdown b = step_error(scheme, params, spec.rel_tol);
      const Unitary exact = scheme.is_split() ? split_step(scheme, model, row.t0, row.h)
                                              : cfqm_step(scheme, model, row.t0, row.h);
      const Unitary ref = reference_propagator(model, row.t0, row.t0 + row.h, spec.ref_tol);
      row.bound = b.total();
      if (scheme.is_split() || !spec.check_trotter) {
        row.measured = spectral_distance(exact, ref);
      } else {
        const Unitary trot = trotterized_cfqm_step(scheme, model, row.t0, row.h, pf);
        row.measured = spectral_distance(trot, ref);
        row.trotter_defect = spectral_distance(trot, exact);
        row.trotter_bound = b.trotter;
      }
      row.ratio = row.measured / row.bound;
      const bool trotter_ok = row.trotter_defect <= row.trotter_bound || scheme.is_split() || !spec.check_trotter;
      row.status = row.ratio <= 1.0 && trotter_ok ? "ok" : "violation";
    } catch (const Error& e) {
      row.status = std::string(code_name(e.code()));
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string validation_csv(const ValidationReport& report) {
  std::ostringstream os;
  os << "scheme_id,t0,h,measured_error,bound_total,ratio,trotter_defect,trotter_bound,status\n";
  for (const auto& row : report.rows) {
    os << report.scheme_id << ',' << num(row.t0) << ',' << num(row.h) << ',' << num(row.measured) << ','
       << num(row.bound) << ',' << num(row.ratio) << ',' << num(row.trotter_defect) << ','
       << num(row.trotter_bound) << ',' << row.status << '\n';
  }
  return os.str();
}

}  // namespace cfqm
