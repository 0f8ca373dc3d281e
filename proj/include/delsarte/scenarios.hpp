// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/io.hpp"
#include "delsarte/report.hpp"
#include "delsarte/transmutation.hpp"

#include <chrono>
#include <map>
#include <random>

namespace delsarte {

struct ScenarioOptions {
  std::uint64_t seed = 20260101;
  bool seed_override = false;
  bool timing = false;
  io::fs::path base;  // directory that relative paths in the config refer to
};

struct ScenarioResult {
  std::string name;
  std::vector<ReportRow> rows;
  io::json details = io::json::object();
  std::vector<std::pair<std::string, Plot>> plots;  // file stem, plot
  bool passed() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
  }
};

namespace scenario {

using io::json;

/// Collects rows; each row's time is the wall time since the previous row.
class Context {
 public:
  Context(std::string name, const json& cfg, const ScenarioOptions& opt)
      : cfg_(cfg), opt_(opt), seed_(opt.seed_override ? opt.seed : io::get_or<std::uint64_t>(cfg, "seed", opt.seed)) {
    result_.name = std::move(name);
    mark_ = std::chrono::steady_clock::now();
  }

  const json& cfg() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }
  const io::fs::path& base() const { return opt_.base; }
  ScenarioResult& result() { return result_; }

  template <class T>
  T get(const char* key, T fallback) const {
    return io::get_or<T>(cfg_, key, fallback);
  }
  json get_json(const char* key, json fallback) const { return cfg_.contains(key) ? cfg_.at(key) : fallback; }
  Grid grid(const char* key, const json& fallback) const { return io::parse_grid(get_json(key, fallback)); }

  double threshold(const std::string& check, double fallback) const {
    if (cfg_.contains("thresholds") && cfg_.at("thresholds").contains(check))
      return cfg_.at("thresholds").at(check).get<double>();
    return fallback;
  }

  void row(const std::string& check, double residual, double fallback_threshold, const std::string& grid) {
    const auto now = std::chrono::steady_clock::now();
    const double ms = opt_.timing ? std::chrono::duration<double, std::milli>(now - mark_).count() : 0.0;
    result_.rows.push_back(ReportRow::make(result_.name, check, residual, threshold(check, fallback_threshold), grid, ms));
    mark_ = std::chrono::steady_clock::now();
  }

 private:
  json cfg_;
  ScenarioOptions opt_;
  std::uint64_t seed_;
  ScenarioResult result_;
  std::chrono::steady_clock::time_point mark_;
};

inline double order_fit(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::string num_tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Sums of three complex Gaussians with widths in [0.5, max_width], each
/// centred at least five widths from both ends of the line.
inline std::vector<GridFunction> gaussian_probes(const Grid& g, int count, std::uint64_t seed, double max_width = 2.0) {
  std::mt19937_64 rng(seed);
  const Axis& ax = g.axis(0);
  std::uniform_real_distribution<double> unit(0.0, 1.0), amp(-1.0, 1.0);
  std::vector<GridFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<std::tuple<double, double, cplx>> bumps;
    for (int j = 0; j < 3; ++j) {
      const double w = 0.5 + (max_width - 0.5) * unit(rng);
      const double c = ax.lo + 5 * w + (ax.hi - ax.lo - 10 * w) * unit(rng);
      const double re = amp(rng), im = amp(rng);
      bumps.emplace_back(c, w, cplx(re, im));
    }
    out.push_back(GridFunction::scalar(g, [&](const Point& x) {
      cplx s = 0.0;
      for (auto [c, w, a] : bumps) s += a * std::exp(-std::pow((x[0] - c) / w, 2));
      return s;
    }));
  }
  return out;
}

/// L = -d^2 + kappa^2 with the seed psi = phi = e^{kappa x}, anchored at the
/// left end where the kernel equals e^{kappa x} cosh(kappa x) / kappa.
struct CoshSeed {
  double kappa;
  Grid grid;
  DifferentialOperator L;
  SpectralFamily fam;
  KernelOptions opt;

  CoshSeed(double k, const Grid& g)
      : kappa(k), grid(g),
        L((-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2}) +
          DifferentialOperator::multiplication(1, CoeffField::constant(k * k))),
        fam(make_family(L, g, recipes::exponential({k}, {k}))) {
    const double x0 = g.axis(0).lo;
    opt.x0 = {x0, 0.0};
    opt.base = Mat::Constant(1, 1, std::exp(k * x0) * std::cosh(k * x0) / k);
  }

  double potential(double x) const { return kappa * kappa * (1.0 - 2.0 / std::pow(std::cosh(kappa * x), 2)); }

  DifferentialOperator transformed_operator() const {
    const double k = kappa;
    return L + DifferentialOperator::multiplication(
                   1, CoeffField::analytic(
                          1,
                          [k](const Point& x, const MultiIndex& d) {
                            if (!d.is_zero()) throw DerivativeUnavailable("closed-form potential is sampled only");
                            return Mat::Constant(1, 1, -2.0 * k * k / std::pow(std::cosh(k * x[0]), 2));
                          },
                          0, "-2k^2 sech^2(kx)"));
  }
};

inline OperatorAction matrix_action(const DifferentialOperator& op, const Grid& g, const Scheme& s) {
  auto M = std::make_shared<SpMatC>(assemble(op, g, s));
  return [M](const GridFunction& f) { return delsarte::apply(*M, f); };
}

// Unchecked random smooth family with no null-function property.
inline SpectralFamily invalid_family(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto fn = [&]() {
    const double a = u(rng), b = u(rng), c = u(rng);
    return GridFunction::scalar(g, [=](const Point& x) {
      return cplx(2.0 + std::sin(0.7 * x[0] + a) + 0.5 * b * std::cos(0.3 * x[0]) + 0.02 * c * x[0]);
    });
  };
  GridFunction psi = fn();
  GridFunction phi = fn();
  return SpectralFamily::unchecked({{{}, 0.0, "random"}}, {psi}, {phi}, {}, "none (negative control)");
}

inline double negative_control(const CoshSeed& s, int probes, std::uint64_t seed, const Scheme& scheme) {
  DelsarteOperator omega(s.L, invalid_family(s.grid, seed), s.opt);
  ProbeFit fit = probe_coefficients(conjugate_operator(s.L, omega, scheme), s.grid, 1, 2);
  const OperatorAction Lt = matrix_action(fitted_operator(s.grid, fit.b), s.grid, scheme);
  return intertwining_residual(s.L, Lt, omega, gaussian_probes(s.grid, probes, seed + 1), -1, scheme);
}

// --- lagrangian-identity ---------------------------------------------------

inline json default_sturm_liouville() {
  return json::parse(R"J({"m": 1, "N": 1, "terms": [{"alpha": [2], "coeff": -1}, {"alpha": [0], "coeff": "sech(x)^2"}]})J");
}
inline json default_dirac() {
  return json::parse(R"J({"m": 2, "N": 2, "terms": [
    {"alpha": [1, 0], "coeff": [["0", "1"], ["1", "0"]]},
    {"alpha": [0, 1], "coeff": [["0", "-i"], ["i", "0"]]}]})J");
}

inline void lagrangian_identity(Context& c) {
  const DifferentialOperator L1 = io::load_operator(c.get_json("operator_1d", default_sturm_liouville()), c.base());
  const DifferentialOperator L2 = io::load_operator(c.get_json("operator_2d", default_dirac()), c.base());
  const ConcomitantSpec s1 = build_concomitant(L1), s2 = build_concomitant(L2);
  c.result().details["concomitant_1d"] = io::to_json(s1);
  c.result().details["concomitant_2d"] = io::to_json(s2);

  const Grid g1 = c.grid("grid_1d", json::parse(R"J({"lo": "-pi", "hi": "pi", "n": 1024, "topology": "open"})J"));
  const json pair = c.get_json("pair_1d", json::array({"sin(x)", "cos(x)"}));
  const json fit_pair = c.get_json("fit_pair_1d", json::array({"sin(x)", "cos(2*x)"}));
  const int p1 = c.get("stencil_order_1d", 4);
  c.row("1d-residual",
        verify_lagrangian_identity(L1, s1, io::parse_function(g1, pair[0]), io::parse_function(g1, pair[1]),
                                   Scheme::centered(p1)),
        1e-8, io::grid_label(g1));

  std::vector<double> hs, es;
  for (int n : c.get("fit_sizes_1d", std::vector<int>{256, 512, 1024})) {
    const Grid g = Grid::line(g1.axis(0).lo, g1.axis(0).hi, n, g1.topology());
    hs.push_back(g.axis(0).h());
    es.push_back(verify_lagrangian_identity(L1, s1, io::parse_function(g, fit_pair[0]),
                                            io::parse_function(g, fit_pair[1]), Scheme::centered(p1)));
  }
  c.row("1d-fit-residual", es.back(), 1e-8, io::grid_label(g1));
  c.row("1d-order_min", order_fit(hs, es), 3.5, io::grid_label(g1));

  const Grid g2 = c.grid("grid_2d", json::parse(R"J({"lo": [0, 0], "hi": ["2*pi", "2*pi"], "n": [128, 128], "topology": "periodic"})J"));
  const json probes = c.get_json("probes_2d", json::parse(R"J({"phi": ["exp(i*x)*cos(y)", "sin(x+y)"],
                                                             "psi": ["cos(x) + i*sin(y)", "exp(-i*y)"]})J"));
  const int p2 = c.get("stencil_order_2d", 6);
  c.row("2d-residual",
        verify_lagrangian_identity(L2, s2, io::parse_function(g2, probes.at("phi")),
                                   io::parse_function(g2, probes.at("psi")), Scheme::centered(p2)),
        1e-8, io::grid_label(g2));
  hs.clear();
  es.clear();
  for (int n : c.get("fit_sizes_2d", std::vector<int>{32, 64, 128})) {
    const Grid g = Grid::plane(g2.axis(0).lo, g2.axis(0).hi, n, g2.axis(1).lo, g2.axis(1).hi, n, g2.topology());
    hs.push_back(g.axis(0).h());
    es.push_back(verify_lagrangian_identity(L2, s2, io::parse_function(g, probes.at("phi")),
                                            io::parse_function(g, probes.at("psi")), Scheme::centered(4)));
  }
  c.row("2d-order_min", order_fit(hs, es), 3.5, io::grid_label(g2));
}

// --- darboux-1d ------------------------------------------------------------

inline json default_line() { return json::parse(R"J({"lo": -10, "hi": 10, "n": 2048, "topology": "open"})J"); }

inline double crum_vs_probe(const CoshSeed& s, const Scheme& scheme, double* closed_form_dev, Plot* plot) {
  DelsarteOperator omega(s.L, s.fam, s.opt);
  const ProbeFit fit = probe_coefficients(conjugate_operator(s.L, omega, scheme), s.grid, 1, 2);
  const GridFunction v = GridFunction::scalar(s.grid, [&](const Point&) { return cplx(s.kappa * s.kappa); });
  const GridFunction seed = GridFunction::scalar(s.grid, [&](const Point& x) { return cplx(std::cosh(s.kappa * x[0])); });
  const GridFunction vt = crum_transform(v, {seed}, scheme);
  double crum = 0.0, closed = 0.0;
  Plot::Series fitted{"probe fit", {}, {}}, crumline{"Crum", {}, {}};
  for (int p = 0; p < s.grid.size(); ++p) {
    if (!fit.covered[p]) continue;
    const double x = s.grid.coords(p)[0];
    const cplx b0 = fit.b[0].at(p)(0, 0);
    crum = std::max(crum, std::abs(b0 - vt(0, p)));
    closed = std::max(closed, std::abs(b0 - s.potential(x)));
    fitted.x.push_back(x);
    fitted.y.push_back(b0.real());
    crumline.x.push_back(x);
    crumline.y.push_back(vt(0, p).real());
  }
  if (closed_form_dev) *closed_form_dev = closed;
  if (plot) {
    plot->title = "transformed potential, kappa = " + num_tag(s.kappa);
    plot->xlabel = "x";
    plot->ylabel = "v~(x)";
    plot->series = {fitted, crumline};
  }
  return crum;
}

inline void darboux_1d(Context& c) {
  const Grid g = c.grid("grid", default_line());
  const double kappa = c.get("kappa", 1.0);
  const int probes = c.get("probes", 10);
  const Scheme scheme = Scheme::centered(c.get("stencil_order", 6));
  const std::string gl = io::grid_label(g);
  CoshSeed s(kappa, g);
  DelsarteOperator omega(s.L, s.fam, s.opt);
  const auto fs = gaussian_probes(g, probes, c.seed());

  double base = 0.0;
  for (const auto& f : fs) base = std::max(base, std::abs(omega.apply(f)(0, omega.anchor()) - f(0, omega.anchor())));
  c.row("base-point-identity", base, 1e-10, gl);
  c.row("transformed-null", null_residual(s.transformed_operator(), 0.0, omega.transformed().psi(0), scheme), 1e-6, gl);

  for (double k : c.get("crum_kappas", std::vector<double>{0.5, 1.0, 2.0})) {
    double closed = 0.0;
    Plot plot;
    const double dev = crum_vs_probe(CoshSeed(k, g), scheme, &closed, &plot);
    c.row("crum-vs-probe-k" + num_tag(k), dev, 1e-5, gl);
    c.row("potential-vs-closed-form-k" + num_tag(k), closed, 1e-5, gl);
    c.result().plots.emplace_back("potential-k" + num_tag(k), plot);
  }

  const OperatorAction Lt = matrix_action(s.transformed_operator(), g, scheme);
  c.row("intertwining", intertwining_residual(s.L, Lt, omega, fs, -1, scheme), 1e-6, gl);
  const Box box{{-1.0, 0.0}, {1.0, 0.0}};
  c.row("locality", locality_score(conjugate_operator(s.L, omega, scheme), smooth_bump(g, box), box, c.get("halo", 8)),
        1e-6, gl);
  c.row("negative-control_min", negative_control(s, probes, c.seed() + 7, scheme), 1e-2, gl);

  Plot det{"kernel determinant", "x", "|det Omega_x|", {{"det", {}, {}}}, true};
  for (int p = 0; p < g.size(); p += 4) {
    det.series[0].x.push_back(g.coords(p)[0]);
    det.series[0].y.push_back(std::abs(omega.kernel().at(p).determinant()));
  }
  c.result().plots.emplace_back("kernel-determinant", det);
}

// --- intertwine ------------------------------------------------------------

inline void intertwine(Context& c) {
  const Grid g = c.grid("grid", default_line());
  const int probes = c.get("probes", 10);
  const Scheme scheme = Scheme::centered(c.get("stencil_order", 4));
  const std::string gl = io::grid_label(g);
  for (double k : c.get("kappas", std::vector<double>{0.5, 1.0, 2.0})) {
    CoshSeed s(k, g);
    DelsarteOperator omega(s.L, s.fam, s.opt);
    const OperatorAction Lt = matrix_action(s.transformed_operator(), g, scheme);
    c.row("intertwining-k" + num_tag(k), intertwining_residual(s.L, Lt, omega, gaussian_probes(g, probes, c.seed()), -1, scheme),
          1e-6, gl);
  }
  std::vector<double> hs, es;
  const double k0 = c.get("order_kappa", 1.0);
  for (int n : c.get("order_sizes", std::vector<int>{256, 512, 1024})) {
    const Grid gn = Grid::line(g.axis(0).lo, g.axis(0).hi, n, Topology::open);
    CoshSeed s(k0, gn);
    DelsarteOperator omega(s.L, s.fam, s.opt);
    const OperatorAction Lt = matrix_action(s.transformed_operator(), gn, scheme);
    hs.push_back(gn.axis(0).h());
    es.push_back(intertwining_residual(s.L, Lt, omega, gaussian_probes(gn, 4, c.seed()), -1, scheme));
  }
  c.row("order_min", order_fit(hs, es), 3.5, gl);
  c.row("negative-control_min", negative_control(CoshSeed(k0, g), probes, c.seed() + 7, scheme), 1e-2, gl);
}

// --- inverse-roundtrip -----------------------------------------------------

inline SpectralFamily exp_family(const DifferentialOperator& L, const Grid& g, const std::vector<double>& rates) {
  std::vector<cplx> r(rates.begin(), rates.end());
  auto recipe = recipes::exponential(r, r);
  for (size_t k = 0; k < rates.size(); ++k) recipe.labels[k].shift = -rates[k] * rates[k];
  return make_family(L, g, recipe);
}

inline void inverse_roundtrip(Context& c) {
  const Grid g = c.grid("grid", json::parse(R"J({"lo": -4, "hi": 4, "n": 1024, "topology": "open"})J"));
  const DifferentialOperator L = io::load_operator(
      c.get_json("operator", json::parse(R"J({"m": 1, "N": 1, "terms": [{"alpha": [2], "coeff": -1}]})J")), c.base());
  const std::string gl = io::grid_label(g);
  const auto sets = c.get("families", std::vector<std::vector<double>>{{0.5}, {0.5, 1.0}, {0.25, 0.5, 0.75, 1.0}});
  const auto fs = gaussian_probes(g, c.get("probes", 10), c.seed(), 0.75);
  for (const auto& rates : sets) {
    const SpectralFamily fam = exp_family(L, g, rates);
    KernelOptions opt;
    opt.x0 = {g.axis(0).lo, 0.0};
    DelsarteOperator omega(L, fam, opt);
    const std::string tag = "-S" + std::to_string(rates.size());
    double inv = 0.0, fwd = 0.0, base = 0.0, fam_rt = 0.0;
    for (const auto& f : fs) {
      const GridFunction of = omega.apply(f);
      inv = std::max(inv, max_abs(omega.inverse_apply(of) - f) / max_abs(f));
      fwd = std::max(fwd, max_abs(omega.apply(omega.inverse_apply(f)) - f) / max_abs(f));
      base = std::max(base, std::abs(of(0, omega.anchor()) - f(0, omega.anchor())));
    }
    for (int k = 0; k < fam.size(); ++k)
      fam_rt = std::max(fam_rt, max_abs(omega.inverse_apply(omega.transformed().psi(k)) - fam.psi(k)) / max_abs(fam.psi(k)));
    c.row("inverse" + tag, inv, 1e-8, gl);
    c.row("forward-inverse" + tag, fwd, 1e-8, gl);
    c.row("family-roundtrip" + tag, fam_rt, 1e-7, gl);
    c.row("base-point-identity" + tag, base, 1e-10, gl);
  }
}

// --- kernel-invariance -----------------------------------------------------

inline std::vector<int> sample_points(const Grid& g, int count) {
  std::vector<int> pts;
  for (int i = 1; i <= count; ++i) pts.push_back(i * g.size() / (count + 1));
  return pts;
}

inline void kernel_invariance(Context& c) {
  const int count = c.get("sample_points", 5);
  {
    const Grid g = c.grid("grid", default_line());
    CoshSeed s(c.get("kappa", 1.0), g);
    DelsarteOperator omega(s.L, s.fam, s.opt);
    const InvarianceReport rep = kernel_invariance_check(omega, sample_points(g, count));
    c.row("cosh-seed-sign", rep.sign_relation, 1e-9, io::grid_label(g));
    c.row("cosh-seed-invariance", rep.invariance, 1e-6, io::grid_label(g));
    Plot det{"kernel determinant", "x", "|det Omega_x|", {{"det", {}, {}}}, true};
    for (int p = 0; p < g.size(); p += 4) {
      det.series[0].x.push_back(g.coords(p)[0]);
      det.series[0].y.push_back(std::abs(omega.kernel().at(p).determinant()));
    }
    c.result().plots.emplace_back("kernel-determinant", det);
  }
  {
    const Grid g = c.grid("pair_grid", json::parse(R"J({"lo": -4, "hi": 4, "n": 1024, "topology": "open"})J"));
    const DifferentialOperator L = (-1.0) * DifferentialOperator::partial(1, 1, MultiIndex{2});
    const SpectralFamily fam = exp_family(L, g, c.get("pair_rates", std::vector<double>{0.5, 1.0}));
    KernelOptions opt;
    opt.x0 = {g.axis(0).lo, 0.0};
    opt.base = Mat::Identity(fam.size(), fam.size()) * 2.0;
    for (int a = 0; a + 1 < fam.size(); ++a) opt.base(a, a + 1) = opt.base(a + 1, a) = 0.5;
    DelsarteOperator omega(L, fam, opt);
    const InvarianceReport rep = kernel_invariance_check(omega, sample_points(g, count));
    c.row("pair-sign", rep.sign_relation, 1e-9, io::grid_label(g));
    c.row("pair-invariance", rep.invariance, 1e-6, io::grid_label(g));
  }
}

// --- dl_complex scenarios --------------------------------------------------

inline json default_torus(int n) {
  return json{{"lo", {0, 0}}, {"hi", {"2*pi", "2*pi"}}, {"n", {n, n}}, {"topology", "periodic"}};
}

inline ComplexFamily separable_family(const Grid& g) {
  DifferentialOperator L1(2, 1), L2(2, 1);
  L1.add_term(MultiIndex{1, 0}, CoeffField::identity(1)).add_term(MultiIndex{0, 0}, CoeffField::expression("sin(x)"));
  L2.add_term(MultiIndex{0, 1}, CoeffField::identity(1)).add_term(MultiIndex{0, 0}, CoeffField::expression("cos(2*y) + i"));
  return ComplexFamily({L1, L2}, g);
}

inline ComplexFamily control_family(const Grid& g) {
  DifferentialOperator L2(2, 1);
  L2.add_term(MultiIndex{0, 1}, CoeffField::expression("x"));
  return ComplexFamily({DifferentialOperator::partial(2, 1, MultiIndex{1, 0}), L2}, g);
}

inline ComplexFamily family_from(const json& j, const Grid& g, const io::fs::path& base) {
  if (j.is_string()) {
    const std::string k = j.get<std::string>();
    if (k == "standard") return ComplexFamily::standard(g);
    if (k == "separable") return separable_family(g);
    if (k == "control") return control_family(g);
    throw ParseError("unknown family '" + k + "'");
  }
  std::vector<DifferentialOperator> ops;
  for (const auto& o : j) ops.push_back(io::load_operator(o, base));
  return ComplexFamily(std::move(ops), g);
}

inline DiscreteForm random_form(const Grid& g, int N, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  DiscreteForm f(g, N, k);
  for (int c = 0; c < f.components(); ++c)
    for (int p = 0; p < g.size(); ++p)
      for (int ch = 0; ch < N; ++ch) {
        const double re = d(rng), im = d(rng);
        f[c](ch, p) = cplx(re, im);
      }
  return f;
}

inline void complex_exactness(Context& c) {
  const Grid g = c.grid("grid", default_torus(64));
  std::mt19937_64 rng(c.seed());
  std::vector<DiscreteForm> probes;
  for (int i = 0; i < c.get("probes", 3); ++i) probes.push_back(random_form(g, 1, 0, rng));
  const std::string gl = io::grid_label(g);
  for (const std::string name : {"standard", "separable"}) {
    const ComplexFamily fam = family_from(json(name), g, c.base());
    c.row(name + "-commutator", fam.max_commutator(), 1e-10, gl);
    c.row(name + "-d2", d_L_squared_residual(fam, probes), 1e-10, gl);
  }
  const ComplexFamily ctl = control_family(g);
  std::vector<DiscreteForm> smooth;
  for (const auto& f : ctl.default_probes()) smooth.push_back(DiscreteForm(0, {f}));
  c.row("control-d2_min", d_L_squared_residual(ctl, smooth), 1e-2, gl);

  const Grid gs = c.grid("assembled_grid", default_torus(16));
  const AssembledComplex cx(separable_family(gs));
  const Vec b = random_form(gs, 1, 0, rng).flat();
  c.row("dstar-squared", (cx.d_star(1) * (cx.d_star(0) * b)).norm() / b.norm(), 1e-10, io::grid_label(gs));
}

inline std::string dims_text(const std::vector<int>& d) {
  std::string s;
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

inline void betti(Context& c) {
  const int n = c.get("n", 8);
  struct Case {
    std::string name;
    Grid grid;
    int N;
    std::vector<int> expect;
  };
  const std::vector<Case> cases{
      {"T1", Grid::line(0, 2 * M_PI, n, Topology::periodic), 1, {1, 1}},
      {"T2", Grid::plane(0, 2 * M_PI, n, 0, 2 * M_PI, n, Topology::periodic), 1, {1, 2, 1}},
      {"T2-N2", Grid::plane(0, 2 * M_PI, n, 0, 2 * M_PI, n, Topology::periodic), 2, {2, 4, 2}},
  };
  const double gap = c.get("gap", 1e-8);
  for (const auto& k : cases) {
    const HarmonicReport rep = harmonic_report(AssembledComplex(ComplexFamily::standard(k.grid, k.N)), gap);
    const auto d = rep.dims();
    int mismatch = d.size() == k.expect.size() ? 0 : 1;
    for (size_t i = 0; i < std::min(d.size(), k.expect.size()); ++i) mismatch += std::abs(d[i] - k.expect[i]);
    c.row(k.name + "-dims=" + dims_text(d), mismatch, 0.0, io::grid_label(k.grid));
    double worst_gap = std::numeric_limits<double>::infinity();
    for (const auto& deg : rep.degrees) worst_gap = std::min(worst_gap, deg.sigma_gap);
    c.row(k.name + "-gap_min", worst_gap, 1e6, io::grid_label(k.grid));
    c.result().details[k.name] = io::to_json(rep);
  }
}

inline void hodge_decomposition(Context& c) {
  const Grid g = c.grid("grid", default_torus(16));
  const int count = c.get("forms", 20);
  const std::string gl = io::grid_label(g);
  std::mt19937_64 rng(c.seed());
  for (const std::string& name : c.get("families", std::vector<std::string>{"standard", "separable"})) {
    const ComplexFamily fam = family_from(json(name), g, c.base());
    const AssembledComplex cx(fam);
    double iso = 0.0, adj = 0.0, min_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= cx.dim(); ++k) {
      const DiscreteForm b = random_form(g, 1, k, rng), d = random_form(g, 1, k, rng);
      const cplx ip = inner_product(b, d);
      iso = std::max(iso, std::abs(ip - inner_product(hodge_star(b), hodge_star(d))) / std::abs(ip));
      if (k < cx.dim()) {
        const DiscreteForm e = random_form(g, 1, k + 1, rng);
        const cplx lhs = inner_product(d_L(fam, b), e);
        adj = std::max(adj, std::abs(lhs - inner_product(b, d_L_adjoint(cx, e))) / std::abs(lhs));
      }
      min_eig = std::min(min_eig, harmonic_degree(cx, k).min_eigenvalue);
    }
    c.row(name + "-star-isometry", iso, 1e-12, gl);
    c.row(name + "-adjointness", adj, 1e-12, gl);
    c.row(name + "-laplacian-min-eig_min", min_eig, -1e-10, gl);

    double rec = 0.0, orth = 0.0;
    for (int k : c.get("degrees", std::vector<int>{0, 1, 2})) {
      const HodgeBases bases = hodge_bases(cx, k);
      for (int i = 0; i < count; ++i) {
        const DecompositionResidual r = hodge_decomposition_check(bases, random_form(g, 1, k, rng));
        rec = std::max(rec, r.reconstruction);
        orth = std::max(orth, r.orthogonality);
      }
    }
    c.row(name + "-reconstruction", rec, 1e-8, gl);
    c.row(name + "-orthogonality", orth, 1e-8, gl);
  }
}

// --- locality --------------------------------------------------------------

inline OperatorAction gaussian_convolution(const Grid& g, double width) {
  const int P = g.size();
  auto K = std::make_shared<Mat>(P, P);
  const double h = g.axis(0).h();
  for (int a = 0; a < P; ++a)
    for (int b = 0; b < P; ++b) {
      const double d = g.coords(a)[0] - g.coords(b)[0];
      (*K)(a, b) = h * std::exp(-d * d / (width * width)) / (width * std::sqrt(M_PI));
    }
  return [K, g](const GridFunction& f) { return GridFunction(g, Mat(f.values() * K->transpose())); };
}

inline void locality(Context& c) {
  const Grid g = c.grid("grid", default_line());
  const Scheme scheme = Scheme::centered(c.get("stencil_order", 6));
  const int halo = c.get("halo", 8);
  const std::string gl = io::grid_label(g);
  CoshSeed s(c.get("kappa", 1.0), g);
  DelsarteOperator omega(s.L, s.fam, s.opt);
  const OperatorAction Lt = conjugate_operator(s.L, omega, scheme);
  const OperatorAction L = matrix_action(s.L, g, scheme);
  const OperatorAction G = gaussian_convolution(g, c.get("convolution_width", 1.0));
  double worst = 0.0, plain = 0.0, conv = std::numeric_limits<double>::infinity();
  for (double centre : c.get("bump_centres", std::vector<double>{-3.0, 0.0, 3.0})) {
    const Box box{{centre - 1.0, 0.0}, {centre + 1.0, 0.0}};
    const GridFunction bump = smooth_bump(g, box);
    worst = std::max(worst, locality_score(Lt, bump, box, halo));
    plain = std::max(plain, locality_score(L, bump, box, halo));
    conv = std::min(conv, locality_score(G, bump, box, halo));
  }
  c.row("darboux-conjugate", worst, 1e-6, gl);
  c.row("differential", plain, 1e-12, gl);
  c.row("convolution_min", conv, 0.1, gl);
}

}  // namespace scenario

struct ScenarioInfo {
  const char* name;
  const char* description;
  void (*run)(scenario::Context&);
};

inline const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> reg{
      {"lagrangian-identity", "Lagrangian identity residuals and convergence orders (1D Sturm-Liouville, 2D Dirac torus)",
       scenario::lagrangian_identity},
      {"darboux-1d", "cosh-seed transmutation: Crum cross-check, intertwining, locality, base-point identity",
       scenario::darboux_1d},
      {"intertwine", "intertwining residual for the cosh seed over kappa, refinement order, invalid-family control",
       scenario::intertwine},
      {"inverse-roundtrip", "Volterra inversion and family round trips for 1, 2 and 4 labels", scenario::inverse_roundtrip},
      {"kernel-invariance", "sign relation and invariance of transformed kernels", scenario::kernel_invariance},
      {"complex-exactness", "d_L squared for commuting families and a non-commuting control", scenario::complex_exactness},
      {"betti", "harmonic dimensions of the standard complex on T1 and T2", scenario::betti},
      {"hodge-decomposition", "star isometry, adjointness, Laplacian positivity and Hodge splitting of random forms",
       scenario::hodge_decomposition},
      {"locality", "locality score of the conjugated operator against differential and convolution references",
       scenario::locality},
  };
  return reg;
}

inline const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (name == s.name) return s;
  std::string valid;
  for (const auto& s : scenario_registry()) valid += std::string(valid.empty() ? "" : ", ") + s.name;
  throw Error("unknown scenario '" + name + "'; valid names: " + valid);
}

/// Runs one scenario. Failures inside the scenario become a failed "error"
/// row carrying the message in the details.
inline ScenarioResult run_scenario(const std::string& name, const io::json& cfg, const ScenarioOptions& opt = {}) {
  const ScenarioInfo& info = find_scenario(name);
  if (!cfg.is_object()) throw ParseError("scenario config must be a JSON object");
  scenario::Context ctx(info.name, cfg, opt);
  try {
    info.run(ctx);
  } catch (const std::exception& e) {
    ctx.row("error", std::numeric_limits<double>::quiet_NaN(), 0.0, "-");
    ctx.result().details["error"] = e.what();
  }
  return ctx.result();
}

}  // namespace delsarte
