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

#include "cfqm/schemes.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "cfqm/errors.hpp"

#ifndef CFQM_DEFAULT_SCHEME_DIR
#define CFQM_DEFAULT_SCHEME_DIR "data/schemes"
#endif

namespace cfqm {

namespace {

constexpr int kMaxHalfOrder = 6;
constexpr int kMinLiteralDigits = 17;

void check_half_order(int s) {
  require(s >= 1 && s <= kMaxHalfOrder, ErrorCode::argument,
          "half order s must be in 1.." + std::to_string(kMaxHalfOrder) + ", got " + std::to_string(s));
}

int significant_digits(const std::string& literal) {
  int digits = 0;
  for (char ch : literal) {
    if (ch == 'e' || ch == 'E') break;
    if (std::isdigit(static_cast<unsigned char>(ch))) ++digits;
  }
  return digits;
}

TransformMatrices build_transform(int s) {
  check_half_order(s);
  TransformMatrices tm;
  tm.s = s;
  tm.T = t_matrix(s, s);
  tm.R = tm.T.inverse();
  const auto gl = gauss_legendre(s);
  tm.nodes = gl.nodes;
  tm.weights = gl.weights;
  tm.Q.resize(s, s);
  for (int g = 0; g < s; ++g)
    for (int k = 0; k < s; ++k) tm.Q(g, k) = gl.weights[k] * std::pow(gl.nodes[k], g) / std::pow(2.0, g + 1);
  const double defect = (tm.T * tm.R - RealMatrix::Identity(s, s)).cwiseAbs().maxCoeff();
  require(defect < 1e-12, ErrorCode::data_integrity, "T * R differs from identity");
  return tm;
}

}  // namespace

GaussLegendre gauss_legendre(int s) {
  check_half_order(s);
  GaussLegendre gl;
  std::vector<double> positive = boost::math::legendre_p_zeros<double>(s);
  std::vector<double> nodes;
  for (double x : positive) {
    nodes.push_back(x);
    if (x != 0.0) nodes.push_back(-x);
  }
  std::sort(nodes.begin(), nodes.end());
  for (double x : nodes) {
    const double dp = boost::math::legendre_p_prime<double>(s, x);
    gl.nodes.push_back(x);
    gl.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  for (int g = 0; g < 2 * s; ++g) {
    double sum = 0.0;
    for (int k = 0; k < s; ++k) sum += gl.weights[k] * std::pow(gl.nodes[k], g);
    const double exact = g % 2 == 0 ? 2.0 / (g + 1) : 0.0;
    require(std::fabs(sum - exact) < 1e-13, ErrorCode::internal, "Gauss-Legendre moment check failed");
  }
  return gl;
}

RealMatrix t_matrix(int s, int jmax) {
  require(s >= 1 && jmax >= 1, ErrorCode::argument, "t_matrix: s and jmax must be positive");
  RealMatrix t(s, jmax);
  for (int g = 0; g < s; ++g)
    for (int j = 1; j <= jmax; ++j) {
      const int e = g + j;
      t(g, j - 1) = e % 2 == 1 ? 2.0 / (e * std::pow(2.0, e)) : 0.0;
    }
  return t;
}

const TransformMatrices& transform_matrices(int s) {
  check_half_order(s);
  static std::mutex mu;
  static std::map<int, TransformMatrices> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  return cache.emplace(s, build_transform(s)).first->second;
}

RealMatrix z_from_y(const RealMatrix& y) {
  return y * transform_matrices(static_cast<int>(y.cols())).Q;
}

double xbar(const RealMatrix& y, int i, int j) {
  require(j >= 1, ErrorCode::argument, "xbar: j must be >= 1");
  double acc = 0.0;
  for (int g = 0; g < y.cols(); ++g) {
    const int e = g + j;
    if (e % 2 == 1) acc += y(i, g) * 2.0 / (e * std::pow(2.0, e));
  }
  return acc;
}

std::pair<RealMatrix, RealMatrix> split_maps(const RealMatrix& a_mat, const RealMatrix& b_mat, int s) {
  require(a_mat.cols() == s && b_mat.cols() == s, ErrorCode::argument, "split_maps: matrices need s columns");
  const auto& tm = transform_matrices(s);
  return {a_mat * tm.R * tm.Q, b_mat * tm.R * tm.Q};
}

RealMatrix CFQMScheme::x() const { return y * transform_matrices(s).T; }

double compute_cbar(const CFQMScheme& scheme, double c) {
  require(c > 0.0, ErrorCode::argument, "compute_cbar: c must be positive");
  const RealMatrix& y = scheme.y;
  double best = 0.0;
  // |xbar_{i,j}| <= sum_g |y_ig| 2 / ((g+j) 2^(g+j)), nonincreasing in j.
  auto tail = [&](int j) {
    double worst = 0.0;
    for (int i = 0; i < y.rows(); ++i) {
      double acc = 0.0;
      for (int g = 0; g < y.cols(); ++g) acc += std::fabs(y(i, g)) * 2.0 / ((g + j) * std::pow(2.0, g + j));
      worst = std::max(worst, acc);
    }
    return worst;
  };
  int j = 1;
  for (; j <= 4 * scheme.s || tail(j) > best; ++j)
    for (int i = 0; i < y.rows(); ++i) best = std::max(best, std::fabs(xbar(y, i, j)));
  return c * best;
}

void check_time_antisymmetry(const CFQMScheme& scheme, double tol) {
  const RealMatrix x = scheme.x();
  auto zero_row = [&](int i) { return x.row(i).cwiseAbs().maxCoeff() <= 1e-15; };
  int first = 0, last = static_cast<int>(x.rows()) - 1;
  while (first <= last && zero_row(first)) ++first;
  while (last >= first && zero_row(last)) --last;
  for (int a = first, b = last; a <= b; ++a, --b) {
    if (scheme.is_split() && a % 2 != b % 2) {
      fail(ErrorCode::data_integrity, scheme.id + ": exponential sequence is not palindromic in its families");
    }
    for (int j = 0; j < x.cols(); ++j) {
      const double sign = j % 2 == 0 ? 1.0 : -1.0;
      if (std::fabs(x(a, j) - sign * x(b, j)) > tol) {
        fail(ErrorCode::data_integrity, scheme.id + ": coefficients violate time antisymmetry at row " +
                                            std::to_string(a) + ", column " + std::to_string(j));
      }
    }
  }
}

CFQMScheme parse_scheme(const std::string& text, const std::string& source) {
  auto bad = [&](const std::string& msg) { fail(ErrorCode::data_integrity, source + ": " + msg); };
  CFQMScheme scheme;
  bool have_header = false;
  int rows = 0;
  std::map<std::string, std::vector<std::vector<double>>> tables;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (tag == "scheme") {
      if (have_header) bad(where + ": duplicate header");
      std::string field;
      if (!(ls >> scheme.id)) bad(where + ": missing id");
      std::string kind;
      while (ls >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) bad(where + ": expected key=value, got '" + field + "'");
        const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        try {
          if (key == "s") scheme.s = std::stoi(value);
          else if (key == "m") rows = std::stoi(value);
          else if (key == "kind") kind = value;
          else bad(where + ": unknown header key '" + key + "'");
        } catch (const std::logic_error&) {
          bad(where + ": bad header value '" + value + "'");
        }
      }
      if (kind == "non-split") scheme.kind = SchemeKind::non_split;
      else if (kind == "split") scheme.kind = SchemeKind::split;
      else bad(where + ": kind must be non-split or split");
      if (scheme.s < 1 || scheme.s > kMaxHalfOrder) bad(where + ": s out of range");
      if (rows < 1) bad(where + ": m must be positive");
      have_header = true;
      continue;
    }
    if (!have_header) bad(where + ": data before header");
    const bool allowed = scheme.is_split() ? (tag == "rho" || tag == "sigma") : (tag == "y" || tag == "z");
    if (!allowed) bad(where + ": unexpected row tag '" + tag + "'");
    std::vector<double> row;
    std::string literal;
    while (ls >> literal) {
      if (significant_digits(literal) < kMinLiteralDigits) {
        bad(where + ": literal '" + literal + "' has fewer than 17 significant digits");
      }
      char* end = nullptr;
      const double v = std::strtod(literal.c_str(), &end);
      if (end == literal.c_str() || *end != '\0' || !std::isfinite(v)) bad(where + ": bad number '" + literal + "'");
      row.push_back(v);
    }
    if (static_cast<int>(row.size()) != scheme.s) bad(where + ": expected " + std::to_string(scheme.s) + " values");
    tables[tag].push_back(row);
  }
  if (!have_header) bad("missing header");
  auto to_matrix = [&](const std::string& tag, bool optional) {
    auto it = tables.find(tag);
    if (it == tables.end()) {
      if (optional) return RealMatrix();
      bad("missing '" + tag + "' rows");
    }
    if (static_cast<int>(it->second.size()) != rows) bad("expected " + std::to_string(rows) + " '" + tag + "' rows");
    RealMatrix m(rows, scheme.s);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < scheme.s; ++k) m(i, k) = it->second[i][k];
    return m;
  };
  const auto& tm = transform_matrices(scheme.s);
  scheme.nodes = tm.nodes;
  scheme.weights = tm.weights;
  if (!scheme.is_split()) {
    scheme.m = rows;
    scheme.stages = rows;
    scheme.y = to_matrix("y", false);
    scheme.z = z_from_y(scheme.y);
    RealMatrix listed = to_matrix("z", true);
    if (listed.size() > 0 && (listed - scheme.z).cwiseAbs().maxCoeff() > 1e-12) {
      bad("listed z rows are inconsistent with y");
    }
  } else {
    scheme.stages = rows;
    scheme.m = 2 * rows;
    scheme.rho = to_matrix("rho", false);
    scheme.sigma = to_matrix("sigma", false);
    const RealMatrix q_inv = tm.Q.inverse();
    const RealMatrix y_t = scheme.rho * q_inv;
    const RealMatrix y_v = scheme.sigma * q_inv;
    scheme.y.resize(scheme.m, scheme.s);
    scheme.z.resize(scheme.m, scheme.s);
    for (int i = 0; i < rows; ++i) {
      scheme.y.row(2 * i) = y_t.row(i);
      scheme.y.row(2 * i + 1) = y_v.row(i);
      scheme.z.row(2 * i) = scheme.rho.row(i);
      scheme.z.row(2 * i + 1) = scheme.sigma.row(i);
    }
  }
  check_time_antisymmetry(scheme);
  return scheme;
}

std::vector<std::string> bundled_scheme_ids() {
  return {"CF2-1", "CF4-2", "CF4-3", "CF6-5", "CF6-6", "GS6-4", "GS10-6"};
}

std::filesystem::path scheme_directory() {
  if (const char* env = std::getenv("CFQM_SCHEME_DIR"); env != nullptr && *env != '\0') return env;
  return CFQM_DEFAULT_SCHEME_DIR;
}

}  // namespace cfqm
