// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/concomitant.hpp"
#include "delsarte/forms.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace delsarte::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ParseError(path.string() + " is empty");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline double parse_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const Expr e = Expr::parse(j.get<std::string>());
    if (e.is_constant() && e.constant_value().imag() == 0.0) return e.constant_value().real();
  }
  throw ParseError("expected a real constant, got " + j.dump());
}

/// {"lo": [..], "hi": [..], "n": [..], "topology": "open" | "periodic"}.
/// Scalars are accepted for one-dimensional grids; bounds may be constant
/// expressions such as "2*pi".
inline Grid parse_grid(const json& j) {
  auto list = [&](const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("grid is missing '") + key + "'");
    const json& v = j.at(key);
    return v.is_array() ? v : json::array({v});
  };
  const json lo = list("lo"), hi = list("hi"), n = list("n");
  if (lo.size() != hi.size() || lo.size() != n.size()) throw ParseError("grid lo, hi and n must have equal length");
  const std::string topo = get_or<std::string>(j, "topology", "open");
  if (topo != "open" && topo != "periodic") throw ParseError("grid topology must be open or periodic");
  std::vector<Axis> axes;
  for (size_t a = 0; a < lo.size(); ++a) axes.push_back({parse_real(lo[a]), parse_real(hi[a]), n[a].get<int>()});
  return Grid(std::move(axes), topo == "open" ? Topology::open : Topology::periodic);
}

inline std::string grid_label(const Grid& g) {
  std::string s = std::to_string(g.extent(0));
  if (g.dim() == 2) s += "x" + std::to_string(g.extent(1));
  return s;
}

inline cplx parse_scalar(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    Expr e = Expr::parse(j.get<std::string>());
    if (!e.is_constant()) throw ParseError("expected a constant, got '" + j.get<std::string>() + "'");
    return e.constant_value();
  }
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("cannot read a complex number from " + j.dump());
}

namespace detail {

// CSV with one row per grid point and 2 N^2 columns: re, im of the row-major entries.
inline MatField read_samples(const fs::path& path, const Grid& g, int N) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sample file " + path.string());
  MatField m(N, g.size());
  std::string line;
  int p = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (p >= g.size()) throw ParseError(path.string() + " has more rows than grid points");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (static_cast<int>(v.size()) != 2 * N * N) throw ParseError(path.string() + ": expected 2 N^2 columns");
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) m.at(p)(r, c) = cplx(v[2 * (r * N + c)], v[2 * (r * N + c) + 1]);
    ++p;
  }
  if (p != g.size()) throw ParseError(path.string() + " has fewer rows than grid points");
  return m;
}

}  // namespace detail

/// Vector-valued function from one expression per channel.
inline GridFunction parse_function(const Grid& g, const json& j) {
  std::vector<Expr> parts;
  if (j.is_string()) parts.push_back(Expr::parse(j.get<std::string>()));
  else
    for (const auto& e : j) parts.push_back(Expr::parse(e.is_number() ? e.dump() : e.get<std::string>()));
  if (parts.empty()) throw ParseError("function needs at least one component");
  return GridFunction::vector(g, static_cast<int>(parts.size()), [&](const Point& x) {
    Vec v(static_cast<Eigen::Index>(parts.size()));
    for (size_t c = 0; c < parts.size(); ++c) v[static_cast<Eigen::Index>(c)] = parts[c].eval(x);
    return v;
  });
}

/// Coefficient: an expression string (times the identity), a number, a matrix
/// of expressions, or {"samples": "file.csv"} on the operator's grid.
inline CoeffField parse_coeff(const json& j, int N, const Grid* grid, const fs::path& base) {
  if (j.is_number()) return CoeffField::constant(Mat(j.get<double>() * Mat::Identity(N, N)));
  if (j.is_string()) {
    const Expr e = Expr::parse(j.get<std::string>());
    if (N == 1) return CoeffField::expression(e);
    std::vector<std::vector<Expr>> rows(N, std::vector<Expr>(N, Expr::parse("0")));
    for (int r = 0; r < N; ++r) rows[r][r] = e;
    return CoeffField::expressions(rows);
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != N) throw ParseError("coefficient matrix must have N rows");
    std::vector<std::vector<Expr>> rows;
    for (const auto& r : j) {
      if (!r.is_array() || static_cast<int>(r.size()) != N) throw ParseError("coefficient matrix must be N x N");
      std::vector<Expr> row;
      for (const auto& e : r) row.push_back(Expr::parse(e.is_number() ? e.dump() : e.get<std::string>()));
      rows.push_back(std::move(row));
    }
    return CoeffField::expressions(rows);
  }
  if (j.is_object() && j.contains("samples")) {
    if (!grid) throw ParseError("sampled coefficients need a grid");
    return CoeffField::sampled(*grid, detail::read_samples(base / j.at("samples").get<std::string>(), *grid, N));
  }
  throw ParseError("cannot read a coefficient from " + j.dump());
}

/// {"m": 1, "N": 1, "terms": [{"alpha": [2], "coeff": "-1"}, ...]}; an
/// optional "order" is checked against the terms.
inline DifferentialOperator parse_operator(const json& j, const Grid* grid = nullptr, const fs::path& base = {}) {
  if (!j.is_object()) throw ParseError("operator spec must be an object");
  const int m = get_or(j, "m", 1), N = get_or(j, "N", 1);
  if (m < 1 || m > 2) throw ParseError("operator dimension must be 1 or 2");
  if (N < 1) throw ParseError("channel count must be positive");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("operator spec needs a 'terms' array");
  DifferentialOperator op(m, N);
  for (const auto& t : j.at("terms")) {
    const auto a = t.at("alpha").get<std::vector<int>>();
    if (static_cast<int>(a.size()) != m) throw ParseError("multi-index length must equal m");
    for (int v : a)
      if (v < 0) throw ParseError("multi-index entries must be non-negative");
    MultiIndex alpha = m == 1 ? MultiIndex{a[0]} : MultiIndex{a[0], a[1]};
    op.add_term(alpha, parse_coeff(t.at("coeff"), N, grid, base));
  }
  if (j.contains("order") && j.at("order").get<int>() != op.order())
    throw ParseError("declared order does not match the terms");
  return op;
}

/// Operator given inline or as a path relative to the config file.
inline DifferentialOperator load_operator(const json& j, const fs::path& base, const Grid* grid = nullptr) {
  if (j.is_string()) {
    const fs::path p = base / j.get<std::string>();
    return parse_operator(read_json(p), grid, p.parent_path());
  }
  return parse_operator(j, grid, base);
}

inline json to_json(cplx v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

/// Term list with directions counted from 1.
inline json to_json(const ConcomitantSpec& spec) {
  json out = json::array();
  for (const auto& t : spec.terms()) {
    json beta = json::array(), gamma = json::array();
    for (int i = 0; i < t.beta.dim(); ++i) beta.push_back(t.beta[i]);
    for (int i = 0; i < t.gamma.dim(); ++i) gamma.push_back(t.gamma[i]);
    out.push_back({{"i", t.direction + 1}, {"beta", beta}, {"gamma", gamma}, {"sign", t.sign}, {"coeff", t.coeff.describe()}});
  }
  return out;
}

inline json to_json(const HarmonicReport& r) {
  json out = json::array();
  for (const auto& d : r.degrees) {
    json gap = std::isfinite(d.sigma_gap) ? json(d.sigma_gap) : json("inf");
    out.push_back({{"degree", d.degree}, {"dim", d.dim}, {"sigma_gap", gap}});
  }
  return out;
}

}  // namespace delsarte::io
