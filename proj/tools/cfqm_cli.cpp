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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfqm/errors.hpp"
#include "cfqm/planner.hpp"
#include "cfqm/propagators.hpp"
#include "cfqm/schemes.hpp"
#include "cfqm/spin_model.hpp"

namespace {

using cfqm::ErrorCode;

double parse_number(const std::string& token) {
  auto caret = token.find('^');
  try {
    if (caret != std::string::npos) {
      return std::pow(std::stod(token.substr(0, caret)), std::stod(token.substr(caret + 1)));
    }
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::logic_error&) {
  }
  cfqm::fail(ErrorCode::argument, "bad grid value '" + token + "'");
}

// Grid items are numbers, 2^k powers, or ranges a..b that step by the
// factor implied by the form: powers of two for 2^a..2^b, decades otherwise.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      grid.push_back(parse_number(item));
      continue;
    }
    const std::string a = item.substr(0, dots), b = item.substr(dots + 2);
    const double lo = parse_number(a), hi = parse_number(b);
    const double factor = a.find('^') != std::string::npos ? std::stod(a.substr(0, a.find('^'))) : 10.0;
    cfqm::require(lo > 0.0 && hi > 0.0 && factor > 1.0, ErrorCode::argument, "bad grid range '" + item + "'");
    const int steps = static_cast<int>(std::lround(std::log(hi / lo) / std::log(factor)));
    const double dir = hi >= lo ? 1.0 : -1.0;
    for (int k = 0; k <= std::abs(steps); ++k) grid.push_back(lo * std::pow(factor, dir * k));
  }
  cfqm::require(!grid.empty(), ErrorCode::argument, "empty grid");
  return grid;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  cfqm::require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path);
  out << text;
  cfqm::require(static_cast<bool>(out), ErrorCode::io, "failed writing " + path);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commutator-free quasi-Magnus planning and validation"};
  app.require_subcommand(1);

  std::vector<std::string> schemes;
  double time = 0.0;
  int spins = 0;
  double eps = 1e-3;
  std::string grid;
  std::uint64_t seed = 1;
  std::string out;
  double rel_tol = cfqm::kDefaultRelTol;
  std::string axis = "time";
  int samples = 50;

  auto* plan_cmd = app.add_subcommand("plan", "Choose the step count that meets a global error target");
  plan_cmd->add_option("--scheme", schemes, "Scheme id")->required();
  plan_cmd->add_option("--time", time, "Total simulation time")->required();
  plan_cmd->add_option("--spins", spins, "Number of spins")->required();
  plan_cmd->add_option("--eps", eps, "Global error target");
  plan_cmd->add_option("--rel-tol", rel_tol, "Relative truncation tolerance for bound tails");
  plan_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Plan over a grid and write CSV");
  sweep_cmd->add_option("--axis", axis, "time, error or spins")->check(CLI::IsMember({"time", "error", "spins"}));
  sweep_cmd->add_option("--grid", grid, "Grid values, e.g. 2^6..2^16 or 1e-2..1e-7 or 8,16,32")->required();
  sweep_cmd->add_option("--scheme", schemes, "Scheme ids (comma separated, Suzuki-<order> allowed)")->required();
  sweep_cmd->add_option("--time", time, "Total time (spins axis defaults to T = n)");
  sweep_cmd->add_option("--spins", spins, "Number of spins");
  sweep_cmd->add_option("--eps", eps, "Global error target");
  sweep_cmd->add_option("--rel-tol", rel_tol, "Relative truncation tolerance for bound tails");
  sweep_cmd->add_option("--out", out, "CSV output file (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "Compare measured step errors with the bounds");
  validate_cmd->add_option("--scheme", schemes, "Scheme id")->required();
  validate_cmd->add_option("--seed", seed, "Model and sampling seed");
  validate_cmd->add_option("--spins", spins, "Number of spins (<= 8)");
  validate_cmd->add_option("--samples", samples, "Number of (t0, h) samples");
  validate_cmd->add_option("--rel-tol", rel_tol, "Relative truncation tolerance for bound tails");
  validate_cmd->add_option("--out", out, "CSV report file (default stdout)");

  auto* order_cmd = app.add_subcommand("verify-order", "Measure the convergence slope of one step");
  order_cmd->add_option("--scheme", schemes, "Scheme id")->required();
  order_cmd->add_option("--spins", spins, "Number of spins (<= 8)");
  order_cmd->add_option("--seed", seed, "Model seed");
  order_cmd->add_option("--grid", grid, "Step sizes (default per order)");
  order_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* gen_cmd = app.add_subcommand("gen-model", "Write a seeded random Heisenberg model");
  gen_cmd->add_option("--spins", spins, "Number of spins")->required();
  gen_cmd->add_option("--seed", seed, "Seed");
  gen_cmd->add_option("--out", out, "Model file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto ids = split_list(schemes);
    std::ostringstream os;
    char buf[64];
    auto fmt = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.10e", v);
      return std::string(buf);
    };
    if (plan_cmd->parsed()) {
      cfqm::require(ids.size() == 1, ErrorCode::argument, "plan takes exactly one scheme");
      cfqm::require(spins >= 2, ErrorCode::argument, "--spins must be >= 2");
      const auto& scheme = cfqm::load_scheme(ids[0]);
      const auto p = cfqm::plan(scheme, cfqm::ModelBounds{1.0, spins}, time, eps, rel_tol);
      os << "scheme," << p.scheme_id << "\n"
         << "time," << fmt(p.t_total) << "\n"
         << "spins," << p.n << "\n"
         << "eps," << fmt(p.epsilon) << "\n"
         << "h," << fmt(p.h) << "\n"
         << "r," << p.r << "\n"
         << "exponentials," << p.exponentials << "\n"
         << "magnus_taylor," << fmt(p.breakdown.magnus_taylor) << "\n"
         << "cfqm_taylor," << fmt(p.breakdown.cfqm_taylor) << "\n"
         << "quadrature," << fmt(p.breakdown.quadrature) << "\n"
         << "trotter," << fmt(p.breakdown.trotter) << "\n"
         << "step_total," << fmt(p.breakdown.total()) << "\n"
         << "suzuki_exponentials,";
      if (p.suzuki_exponentials) os << *p.suzuki_exponentials;
      os << "\n";
      write_output(out, os.str());
    } else if (sweep_cmd->parsed()) {
      cfqm::SweepSpec spec;
      spec.axis = cfqm::parse_axis(axis);
      spec.grid = parse_grid(grid);
      spec.schemes = ids;
      spec.epsilon = eps;
      spec.rel_tol = rel_tol;
      if (sweep_cmd->count("--time") > 0) spec.t_total = time;
      if (spec.axis != cfqm::SweepAxis::spins) {
        cfqm::require(spins >= 2, ErrorCode::argument, "--spins must be >= 2");
        spec.n = spins;
      }
      if (spec.axis == cfqm::SweepAxis::error) {
        cfqm::require(spec.t_total.has_value(), ErrorCode::argument, "--time is required for the error axis");
      }
      write_output(out, cfqm::sweep_csv(spec));
    } else if (validate_cmd->parsed()) {
      cfqm::require(ids.size() == 1, ErrorCode::argument, "validate takes exactly one scheme");
      cfqm::ValidationSpec spec;
      spec.seed = seed;
      spec.n = spins == 0 ? 6 : spins;
      spec.samples = samples;
      spec.rel_tol = rel_tol;
      const auto report = cfqm::validate(cfqm::load_scheme(ids[0]), spec);
      write_output(out, cfqm::validation_csv(report));
      if (!report.passed()) {
        std::cerr << "error code=bound-violation message="
                  << quote(std::to_string(report.violations()) + " sample(s) exceed the bound") << "\n";
        return 3;
      }
    } else if (order_cmd->parsed()) {
      cfqm::require(ids.size() == 1, ErrorCode::argument, "verify-order takes exactly one scheme");
      const auto& scheme = cfqm::load_scheme(ids[0]);
      const auto model = cfqm::random_model(spins == 0 ? 6 : spins, seed);
      const auto h_grid = grid.empty() ? cfqm::default_order_grid(scheme.s) : parse_grid(grid);
      const auto report = cfqm::verify_order(scheme, model, h_grid);
      os << "h,error\n";
      for (std::size_t k = 0; k < report.errors.size(); ++k)
        os << fmt(report.h_grid[k]) << ',' << fmt(report.errors[k]) << "\n";
      os << "# slope " << fmt(report.slope) << " expected " << report.expected
         << (report.accepted ? " accepted" : " rejected") << "\n";
      write_output(out, os.str());
      if (!report.accepted) {
        std::cerr << "error code=order-rejected message=" << quote("slope outside the accepted band") << "\n";
        return 3;
      }
    } else if (gen_cmd->parsed()) {
      write_output(out, cfqm::format_model(cfqm::random_model(spins, seed)));
    }
  } catch (const cfqm::Error& e) {
    std::cerr << "error code=" << cfqm::code_name(e.code()) << " message=" << quote(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error code=internal message=" << quote(e.what()) << "\n";
    return 1;
  }
  return 0;
}
