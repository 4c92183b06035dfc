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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "cfqm/errors.hpp"
#include "cfqm/propagators.hpp"
#include "cfqm/schemes.hpp"
#include "cfqm/spin_model.hpp"

namespace cfqm {

namespace {

constexpr int kCheckSpins = 4;
constexpr std::uint64_t kCheckSeed = 7;
constexpr double kCheckStart = 0.3;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void require_order(const CFQMScheme& scheme) {
  const HeisenbergModel model = random_model(kCheckSpins, kCheckSeed);
  OrderReport report;
  try {
    report = verify_order(scheme, model, default_order_grid(scheme.s));
  } catch (const Error& e) {
    fail(ErrorCode::data_integrity, scheme.id + ": order check failed: " + e.what());
  }
  if (!report.accepted) {
    std::ostringstream os;
    os << scheme.id << ": measured order slope " << report.slope << ", expected " << report.expected;
    fail(ErrorCode::data_integrity, os.str());
  }
}

}  // namespace

std::vector<double> default_order_grid(int s) {
  double lo = 0.0, hi = 0.0;
  switch (s) {
    case 1: lo = 0.125; hi = 1.0; break;
    case 2: lo = 0.25; hi = 1.0; break;
    default: lo = 0.5; hi = 1.5; break;
  }
  std::vector<double> grid;
  const int points = 5;
  for (int k = 0; k < points; ++k) grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1)));
  return grid;
}

OrderReport verify_order(const CFQMScheme& scheme, const HeisenbergModel& model, const std::vector<double>& h_grid,
                         double ref_tol) {
  require(model.n <= 8, ErrorCode::argument, "verify_order: model must have n <= 8");
  require(h_grid.size() >= 2, ErrorCode::argument, "verify_order: need at least two step sizes");
  OrderReport report;
  report.h_grid = h_grid;
  std::sort(report.h_grid.begin(), report.h_grid.end());
  report.expected = 2 * scheme.s + 1;
  const double floor = std::max(kOrderErrorFloor, 10.0 * ref_tol);
  for (double h : report.h_grid) {
    require(h > 0.0, ErrorCode::argument, "verify_order: step sizes must be positive");
    const Unitary step = scheme.is_split() ? split_step(scheme, model, kCheckStart, h)
                                           : cfqm_step(scheme, model, kCheckStart, h);
    const Unitary ref = reference_propagator(model, kCheckStart, kCheckStart + h, ref_tol);
    const double err = spectral_distance(step, ref);
    if (err < floor) {
      std::ostringstream os;
      os << "grid-too-fine: error " << err << " at h=" << h << " is below the floor " << floor;
      fail(ErrorCode::grid_too_fine, os.str());
    }
    report.errors.push_back(err);
  }
  for (std::size_t k = 1; k < report.errors.size(); ++k) {
    if (!(report.errors[k] > report.errors[k - 1])) {
      fail(ErrorCode::outside_asymptotic_regime, "outside-asymptotic-regime: errors are not increasing in h");
    }
  }
  const std::size_t count = report.errors.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    mx += std::log(report.h_grid[k]);
    my += std::log(report.errors[k]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double dx = std::log(report.h_grid[k]) - mx;
    sxy += dx * (std::log(report.errors[k]) - my);
    sxx += dx * dx;
  }
  report.slope = sxy / sxx;
  report.accepted = report.slope >= report.expected - 0.15 && report.slope <= report.expected + 0.3;
  return report;
}

CFQMScheme load_scheme_file(const std::filesystem::path& path) {
  CFQMScheme scheme = parse_scheme(read_file(path), path.string());
  require_order(scheme);
  return scheme;
}

const CFQMScheme& load_scheme(const std::string& id) {
  const auto ids = bundled_scheme_ids();
  require(std::find(ids.begin(), ids.end(), id) != ids.end(), ErrorCode::lookup, "unknown scheme id '" + id + "'");
  static std::mutex mu;
  static std::map<std::string, CFQMScheme> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  const auto path = scheme_directory() / (id + ".txt");
  CFQMScheme scheme = parse_scheme(read_file(path), path.string());
  require(scheme.id == id, ErrorCode::data_integrity, path.string() + ": header id does not match file name");
  require_order(scheme);
  return cache.emplace(id, std::move(scheme)).first->second;
}

}  // namespace cfqm
