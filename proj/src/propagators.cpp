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

#include "cfqm/propagators.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "cfqm/errors.hpp"

namespace cfqm {

namespace {

using cd = std::complex<double>;

constexpr int kReferenceMaxLevel = 20;
constexpr int kReferenceMaxColumns = 8;

Eigen::Matrix4cd local_exp(const LocalTerm& term, double tau) {
  const int d = 1 << term.sites;
  Eigen::MatrixXcd op = term.op.topLeftCorner(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
  Eigen::VectorXcd phase = (es.eigenvalues().cast<cd>() * cd(0.0, -tau)).array().exp();
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  out.topLeftCorner(d, d) = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

// m <- gate * m, with the gate acting on term.sites consecutive sites.
void apply_gate_left(ComplexMatrix& m, const Eigen::Matrix4cd& gate, int first_site, int sites, int n) {
  const Eigen::Index dim = m.rows();
  const int shift = n - first_site - sites;
  const int local = 1 << sites;
  const Eigen::Index mask = Eigen::Index{local - 1} << shift;
  cd in[4], out[4];
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index rest = 0; rest < dim; ++rest) {
      if (rest & mask) continue;
      for (int a = 0; a < local; ++a) in[a] = m(rest | (Eigen::Index{a} << shift), col);
      for (int o = 0; o < local; ++o) {
        cd acc = 0.0;
        for (int a = 0; a < local; ++a) acc += gate(o, a) * in[a];
        out[o] = acc;
      }
      for (int o = 0; o < local; ++o) m(rest | (Eigen::Index{o} << shift), col) = out[o];
    }
  }
}

void apply_terms_left(ComplexMatrix& m, const std::vector<LocalTerm>& terms, double tau, int n) {
  if (tau == 0.0) return;
  for (const auto& term : terms) apply_gate_left(m, local_exp(term, tau), term.first_site, term.sites, n);
}

// Sum of weighted parity terms over the quadrature nodes; all share the same
// support layout.
std::vector<LocalTerm> combine_terms(const HeisenbergModel& model, const std::vector<double>& times,
                                     const Eigen::VectorXd& weights, Parity parity) {
  std::vector<LocalTerm> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto terms = parity_terms(model, times[k], parity);
    if (out.empty()) {
      out = terms;
      for (auto& t : out) t.op *= weights(k);
    } else {
      for (std::size_t b = 0; b < terms.size(); ++b) out[b].op += weights(k) * terms[b].op;
    }
  }
  return out;
}

std::vector<double> node_times(const CFQMScheme& scheme, double t0, double h) {
  std::vector<double> times;
  for (double c : scheme.nodes) times.push_back(t0 + h / 2.0 + c * h / 2.0);
  return times;
}

void require_non_split(const CFQMScheme& scheme, const char* what) {
  require(!scheme.is_split(), ErrorCode::argument, std::string(what) + ": requires a non-split scheme, got " + scheme.id);
}

}  // namespace

Unitary expm_antihermitian(const DenseHermitian& h, double tau) {
  if (h.dim() == 0) return Unitary();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  require(es.info() == Eigen::Success, ErrorCode::internal, "expm_antihermitian: eigensolver failed");
  Eigen::VectorXcd phase = (es.eigenvalues().cast<cd>() * cd(0.0, -tau)).array().exp();
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

Unitary expm_diagonal(const Eigen::VectorXd& d, double tau) {
  Eigen::VectorXcd phase = (d.cast<cd>() * cd(0.0, -tau)).array().exp();
  return phase.asDiagonal();
}

double spectral_distance(const Unitary& u, const Unitary& v) {
  require(u.rows() == v.rows() && u.cols() == v.cols(), ErrorCode::argument,
          "spectral_distance: dimension mismatch");
  ComplexMatrix d = u - v;
  ComplexMatrix g = d.adjoint() * d;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

ProductFormulaSpec make_suzuki(int s) {
  require(s >= 1, ErrorCode::argument, "make_suzuki: s must be >= 1");
  ProductFormulaSpec pf;
  pf.p = 2;
  pf.stages = {{0.5, 1.0}, {0.5, 0.0}};
  for (int k = 2; k <= s; ++k) {
    const double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2 * k - 1)));
    const double scales[5] = {u, u, 1.0 - 4.0 * u, u, u};
    std::vector<ProductFormulaStage> next;
    for (double a : scales)
      for (const auto& st : pf.stages) next.push_back({a * st.xi, a * st.beta});
    pf.stages = std::move(next);
    pf.p = 2 * k;
  }
  return pf;
}

Unitary expm_local_terms(const std::vector<LocalTerm>& terms, double tau, int n) {
  ComplexMatrix m = ComplexMatrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  apply_terms_left(m, terms, tau, n);
  return m;
}

Unitary apply_product_formula(const ProductFormulaSpec& pf, const std::vector<LocalTerm>& b,
                              const std::vector<LocalTerm>& c, int n) {
  ComplexMatrix m = ComplexMatrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& st : pf.stages) {
    apply_terms_left(m, b, st.xi, n);
    apply_terms_left(m, c, st.beta, n);
  }
  return m;
}

Unitary cfqm_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h) {
  require_non_split(scheme, "cfqm_step");
  const auto times = node_times(scheme, t0, h);
  std::vector<ComplexMatrix> nodes;
  for (double t : times) nodes.push_back(hamiltonian_at(model, t).matrix());
  const Eigen::Index dim = nodes.front().rows();
  Unitary u = Unitary::Identity(dim, dim);
  for (int i = 0; i < scheme.m; ++i) {
    ComplexMatrix gen = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < scheme.s; ++k) gen += scheme.z(i, k) * nodes[k];
    u = u * expm_antihermitian(DenseHermitian(gen), h);
  }
  return u;
}

Unitary trotterized_cfqm_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h,
                              const ProductFormulaSpec& pf) {
  require_non_split(scheme, "trotterized_cfqm_step");
  require(pf.p == 2 * scheme.s, ErrorCode::argument, "trotterized_cfqm_step: product formula order must be 2s");
  const auto times = node_times(scheme, t0, h);
  const Eigen::Index dim = Eigen::Index{1} << model.n;
  Unitary u = Unitary::Identity(dim, dim);
  for (int i = 0; i < scheme.m; ++i) {
    Eigen::VectorXd w = scheme.z.row(i).transpose() * h;
    auto b = combine_terms(model, times, w, Parity::odd);
    auto c = combine_terms(model, times, w, Parity::even);
    u = u * apply_product_formula(pf, b, c, model.n);
  }
  return u;
}

Unitary split_step(const CFQMScheme& scheme, const HermitianFn& coupling, const HermitianFn& field, double t0,
                   double h) {
  require(scheme.is_split(), ErrorCode::argument, "split_step: requires a split scheme, got " + scheme.id);
  const auto times = node_times(scheme, t0, h);
  std::vector<ComplexMatrix> tk, vk;
  for (double t : times) {
    tk.push_back(coupling(t).matrix());
    vk.push_back(field(t).matrix());
  }
  auto check_self_commuting = [](const std::vector<ComplexMatrix>& ms, const char* name) {
    for (std::size_t a = 0; a < ms.size(); ++a)
      for (std::size_t b = a + 1; b < ms.size(); ++b) {
        const double scale = std::max(1.0, ms[a].cwiseAbs().maxCoeff() * ms[b].cwiseAbs().maxCoeff());
        const double comm = (ms[a] * ms[b] - ms[b] * ms[a]).cwiseAbs().maxCoeff();
        require(comm <= 1e-12 * scale, ErrorCode::precondition,
                std::string("split_step: ") + name + " part does not commute with itself at the nodes");
      }
  };
  check_self_commuting(tk, "coupling");
  check_self_commuting(vk, "field");
  const Eigen::Index dim = tk.front().rows();
  Unitary u = Unitary::Identity(dim, dim);
  for (int i = 0; i < scheme.m; ++i) {
    const auto& src = i % 2 == 0 ? tk : vk;
    ComplexMatrix gen = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < scheme.s; ++k) gen += scheme.z(i, k) * src[k];
    u = u * expm_antihermitian(DenseHermitian(gen), h);
  }
  return u;
}

Unitary split_step(const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double h) {
  require(scheme.is_split(), ErrorCode::argument, "split_step: requires a split scheme, got " + scheme.id);
  const auto times = node_times(scheme, t0, h);
  // Coupling is time independent and the field is diagonal, so both families
  // self-commute and each exponential reduces to phases in a fixed basis.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(coupling_part(model).matrix());
  const ComplexMatrix& vecs = es.eigenvectors();
  std::vector<Eigen::VectorXd> fields;
  for (double t : times) fields.push_back(field_diagonal(model, t));
  const Eigen::Index dim = vecs.rows();
  Unitary u = Unitary::Identity(dim, dim);
  for (int i = 0; i < scheme.m; ++i) {
    if (i % 2 == 0) {
      const double weight = scheme.z.row(i).sum();
      if (weight == 0.0) continue;
      Eigen::VectorXcd phase = (es.eigenvalues().cast<cd>() * cd(0.0, -h * weight)).array().exp();
      u = u * (vecs * phase.asDiagonal() * vecs.adjoint());
    } else {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
      for (int k = 0; k < scheme.s; ++k) d += scheme.z(i, k) * fields[k];
      u = u * expm_diagonal(d, h);
    }
  }
  return u;
}

Unitary midpoint_propagator(const HeisenbergModel& model, double t0, double t1, int steps) {
  require(steps >= 1, ErrorCode::argument, "midpoint_propagator: steps must be >= 1");
  const double dt = (t1 - t0) / steps;
  const Eigen::Index dim = Eigen::Index{1} << model.n;
  Unitary u = Unitary::Identity(dim, dim);
  for (int j = 0; j < steps; ++j) {
    u = expm_antihermitian(hamiltonian_at(model, t0 + (j + 0.5) * dt), dt) * u;
  }
  return u;
}

ReferenceResult reference_propagator_info(const HeisenbergModel& model, double t0, double t1, double tol) {
  require(t1 > t0, ErrorCode::argument, "reference_propagator: requires t1 > t0");
  require(tol >= 1e-13, ErrorCode::argument, "reference_propagator: tol must be >= 1e-13");
  // The composite midpoint rule is symmetric, so its error expands in even
  // powers of the micro-step and the tableau uses factors 4^j - 1.
  std::vector<Unitary> prev;
  double last = 0.0;
  for (int level = 0; level <= kReferenceMaxLevel; ++level) {
    const int steps = 1 << level;
    std::vector<Unitary> row{midpoint_propagator(model, t0, t1, steps)};
    const int cols = std::min<int>(level, kReferenceMaxColumns);
    for (int j = 1; j <= cols; ++j) {
      const double f = std::pow(4.0, j) - 1.0;
      row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / f);
    }
    if (level >= 1) {
      const Unitary& prev_best = prev[std::min<int>(level - 1, kReferenceMaxColumns)];
      last = spectral_distance(row.back(), prev_best);
      if (level >= 3 && last < tol) return {row.back(), steps, last};
    }
    prev = std::move(row);
  }
  fail(ErrorCode::oracle, "reference_propagator: no convergence within 2^20 micro-steps");
}

Unitary reference_propagator(const HeisenbergModel& model, double t0, double t1, double tol) {
  return reference_propagator_info(model, t0, t1, tol).u;
}

Method parse_method(const std::string& name) {
  if (name == "midpoint") return Method::midpoint;
  if (name == "cfqm") return Method::cfqm;
  if (name == "trotterized-cfqm") return Method::trotterized_cfqm;
  if (name == "split") return Method::split;
  fail(ErrorCode::argument, "unknown method '" + name + "'");
}

Unitary evolve(Method method, const CFQMScheme& scheme, const HeisenbergModel& model, double t0, double t_total,
               int steps) {
  require(steps >= 1, ErrorCode::argument, "evolve: steps must be >= 1");
  const double h = t_total / steps;
  const Eigen::Index dim = Eigen::Index{1} << model.n;
  Unitary u = Unitary::Identity(dim, dim);
  const ProductFormulaSpec pf = make_suzuki(scheme.s);
  for (int j = 0; j < steps; ++j) {
    const double t = t0 + j * h;
    Unitary step;
    switch (method) {
      case Method::midpoint: step = midpoint_propagator(model, t, t + h, 1); break;
      case Method::cfqm: step = cfqm_step(scheme, model, t, h); break;
      case Method::trotterized_cfqm: step = trotterized_cfqm_step(scheme, model, t, h, pf); break;
      case Method::split: step = split_step(scheme, model, t, h); break;
    }
    u = step * u;
  }
  return u;
}

}  // namespace cfqm
