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

#include "cfqm/spin_model.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "cfqm/errors.hpp"

namespace cfqm {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::Matrix4cd heisenberg_bond() {
  Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
  b(0, 0) = 1.0;
  b(1, 1) = -1.0;
  b(2, 2) = -1.0;
  b(3, 3) = 1.0;
  b(1, 2) = 2.0;
  b(2, 1) = 2.0;
  return b;
}

Eigen::Matrix4cd z_first() { return Eigen::Vector4cd(1.0, 1.0, -1.0, -1.0).asDiagonal(); }
Eigen::Matrix4cd z_second() { return Eigen::Vector4cd(1.0, -1.0, 1.0, -1.0).asDiagonal(); }

void check_dense_size(int n) {
  require(n <= kMaxDenseSpins, ErrorCode::resource,
          "dense matrices limited to n <= " + std::to_string(kMaxDenseSpins) + ", got n=" + std::to_string(n));
}

}  // namespace

DenseHermitian::DenseHermitian(ComplexMatrix m, double rel_tol) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), ErrorCode::argument, "DenseHermitian: matrix must be square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  require(defect <= rel_tol * scale, ErrorCode::argument, "DenseHermitian: matrix is not Hermitian");
}

void HeisenbergModel::validate() const {
  require(n >= 2, ErrorCode::argument, "HeisenbergModel: n must be >= 2");
  require(static_cast<int>(phases.size()) == n && static_cast<int>(freqs.size()) == n, ErrorCode::argument,
          "HeisenbergModel: need n phases and n frequencies");
  for (int i = 0; i < n; ++i)
    require(std::isfinite(phases[i]) && std::isfinite(freqs[i]), ErrorCode::argument,
            "HeisenbergModel: non-finite parameter");
}

HeisenbergModel random_model(int n, std::uint64_t seed) {
  require(n >= 2, ErrorCode::argument, "random_model: n must be >= 2");
  std::mt19937_64 rng(seed);
  HeisenbergModel model;
  model.n = n;
  for (int i = 0; i < n; ++i) {
    model.phases.push_back(2.0 * std::numbers::pi * unit_uniform(rng));
    model.freqs.push_back(0.5 + 0.5 * unit_uniform(rng));
  }
  return model;
}

HeisenbergModel static_model(int n, std::uint64_t seed) {
  HeisenbergModel model = random_model(n, seed);
  std::fill(model.freqs.begin(), model.freqs.end(), 0.0);
  return model;
}

std::string format_model(const HeisenbergModel& model) {
  model.validate();
  std::ostringstream os;
  char buf[40];
  os << "heisenberg n=" << model.n << "\nphi";
  for (double v : model.phases) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    os << buf;
  }
  os << "\nomega";
  for (double v : model.freqs) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    os << buf;
  }
  os << "\n";
  return os.str();
}

HeisenbergModel parse_model(const std::string& text) {
  HeisenbergModel model;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "heisenberg") {
      std::string field;
      require(static_cast<bool>(ls >> field) && field.rfind("n=", 0) == 0, ErrorCode::argument,
              "model file: expected 'heisenberg n=<n>'");
      model.n = std::stoi(field.substr(2));
      have_header = true;
    } else if (tag == "phi" || tag == "omega") {
      auto& dst = tag == "phi" ? model.phases : model.freqs;
      double v;
      while (ls >> v) dst.push_back(v);
      require(ls.eof(), ErrorCode::argument, "model file: bad number on '" + tag + "' line");
    } else {
      fail(ErrorCode::argument, "model file: unknown line tag '" + tag + "'");
    }
  }
  require(have_header, ErrorCode::argument, "model file: missing header");
  model.validate();
  return model;
}

std::vector<LocalTerm> parity_terms(const HeisenbergModel& model, double t, Parity parity) {
  model.validate();
  const int n = model.n;
  const double scale = 1.0 / (4.0 * n);
  auto field = [&](int site) { return std::cos(model.phases[site] + model.freqs[site] * t); };
  std::vector<LocalTerm> terms;
  // 0-based site a is odd in 1-based numbering when a is even.
  const int start = parity == Parity::odd ? 0 : 1;
  for (int a = start; a < n; a += 2) {
    LocalTerm term;
    term.first_site = a;
    if (a + 1 < n) {
      term.sites = 2;
      term.op = heisenberg_bond() + field(a) * z_first();
      // The last site of an even-length chain has no even bond; its field
      // joins the final odd block.
      if (parity == Parity::odd && a + 2 == n) term.op += field(a + 1) * z_second();
    } else {
      if (parity == Parity::even) continue;
      term.sites = 1;
      term.op = Eigen::Matrix4cd::Zero();
      term.op(0, 0) = field(a);
      term.op(1, 1) = -field(a);
    }
    term.op *= scale;
    terms.push_back(term);
  }
  return terms;
}

ComplexMatrix embed(const std::vector<LocalTerm>& terms, int n) {
  check_dense_size(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : terms) {
    const int shift = n - term.first_site - term.sites;
    const Eigen::Index local = Eigen::Index{1} << term.sites;
    const Eigen::Index mask = (local - 1) << shift;
    for (Eigen::Index col = 0; col < dim; ++col) {
      const Eigen::Index in = (col & mask) >> shift;
      const Eigen::Index rest = col & ~mask;
      for (Eigen::Index o = 0; o < local; ++o) {
        const auto v = term.op(o, in);
        if (v != 0.0) out(rest | (o << shift), col) += v;
      }
    }
  }
  return out;
}

std::pair<DenseHermitian, DenseHermitian> split_at(const HeisenbergModel& model, double t) {
  check_dense_size(model.n);
  return {DenseHermitian(embed(parity_terms(model, t, Parity::odd), model.n)),
          DenseHermitian(embed(parity_terms(model, t, Parity::even), model.n))};
}

DenseHermitian hamiltonian_at(const HeisenbergModel& model, double t) {
  auto [odd, even] = split_at(model, t);
  return DenseHermitian(odd.matrix() + even.matrix());
}

DenseHermitian coupling_part(const HeisenbergModel& model) {
  model.validate();
  check_dense_size(model.n);
  std::vector<LocalTerm> bonds;
  for (int a = 0; a + 1 < model.n; ++a) {
    LocalTerm term;
    term.first_site = a;
    term.sites = 2;
    term.op = heisenberg_bond() / (4.0 * model.n);
    bonds.push_back(term);
  }
  return DenseHermitian(embed(bonds, model.n));
}

Eigen::VectorXd field_diagonal(const HeisenbergModel& model, double t) {
  model.validate();
  check_dense_size(model.n);
  const int n = model.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (int a = 0; a < n; ++a) {
    const double f = std::cos(model.phases[a] + model.freqs[a] * t) / (4.0 * n);
    const int shift = n - 1 - a;
    for (Eigen::Index x = 0; x < dim; ++x) diag(x) += ((x >> shift) & 1) ? -f : f;
  }
  return diag;
}

TaylorBound taylor_bound_c(const HeisenbergModel& model) {
  model.validate();
  double omega_max = 0.0;
  for (double w : model.freqs) omega_max = std::max(omega_max, std::fabs(w));
  if (omega_max <= 1.0) return {1.0, false};
  return {std::max(1.0, omega_max), true};
}

}  // namespace cfqm
