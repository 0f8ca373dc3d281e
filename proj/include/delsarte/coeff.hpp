// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/expr.hpp"
#include "delsarte/stencil.hpp"

#include <functional>
#include <memory>
#include <sstream>

namespace delsarte {

/// Closure giving the alpha-th partial derivative of an N x N coefficient at a point.
using AnalyticFn = std::function<Mat(const Point&, const MultiIndex&)>;

/// Immutable N x N matrix-valued coefficient a(x). Nodes are shared, so
/// copies are cheap. Derivatives come from the most exact source available:
/// symbolic for expressions, the closure up to its declared order, finite
/// differences with the sampling scheme otherwise.
class CoeffField {
 public:
  CoeffField() : CoeffField(constant(Mat::Zero(1, 1))) {}

  static CoeffField constant(const Mat& value) {
    if (value.rows() != value.cols()) throw DimensionError("coefficient must be square");
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->N = static_cast<int>(value.rows());
    n->value = value;
    return CoeffField(n);
  }
  static CoeffField constant(cplx v) { return constant(Mat::Constant(1, 1, v)); }
  static CoeffField identity(int N) { return constant(Mat::Identity(N, N)); }
  static CoeffField zero(int N) { return constant(Mat::Zero(N, N)); }

  // `max_deriv` is the highest derivative order the closure can supply;
  // anything beyond it is obtained by differencing samples.
  static CoeffField analytic(int N, AnalyticFn fn, int max_deriv = 0, std::string label = "analytic") {
    auto n = std::make_shared<Node>();
    n->kind = Kind::analytic;
    n->N = N;
    n->fn = std::move(fn);
    n->max_deriv = max_deriv;
    n->label = std::move(label);
    return CoeffField(n);
  }

  static CoeffField expression(const Expr& e) {
    if (e.is_constant()) return constant(e.constant_value());
    return expressions({{e}});
  }
  static CoeffField expression(std::string_view text) { return expression(Expr::parse(text)); }

  // Matrix of expressions, row-major nesting.
  static CoeffField expressions(const std::vector<std::vector<Expr>>& rows) {
    const int N = static_cast<int>(rows.size());
    bool all_const = true;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != N) throw DimensionError("coefficient matrix must be square");
      for (const auto& e : r) all_const = all_const && e.is_constant();
    }
    if (all_const) {
      Mat m(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = rows[i][j].constant_value();
      return constant(m);
    }
    std::ostringstream label;
    if (N == 1) {
      label << rows[0][0].str();
    } else {
      label << "[";
      for (int i = 0; i < N; ++i) {
        label << (i ? ", [" : "[");
        for (int j = 0; j < N; ++j) label << (j ? ", " : "") << rows[i][j].str();
        label << "]";
      }
      label << "]";
    }
    auto table = std::make_shared<std::vector<std::vector<Expr>>>(rows);
    AnalyticFn fn = [table, N](const Point& x, const MultiIndex& a) {
      Mat m(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = (*table)[i][j].derivative(a).eval(x);
      return m;
    };
    return analytic(N, std::move(fn), 1 << 20, label.str());
  }

  static CoeffField sampled(const Grid& g, const MatField& data) {
    if (data.points() != g.size()) throw DimensionError("sampled coefficient does not match grid");
    auto n = std::make_shared<Node>();
    n->kind = Kind::sampled;
    n->N = data.N;
    n->grid = std::make_shared<Grid>(g);
    n->samples = data;
    return CoeffField(n);
  }

  int N() const { return node_->N; }
  bool is_constant() const { return node_->kind == Kind::constant; }
  const Mat& constant_value() const {
    if (!is_constant()) throw Error("coefficient is not constant");
    return node_->value;
  }
  bool is_zero() const { return is_constant() && node_->value.isZero(0.0); }

  std::string describe() const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::constant: {
        std::ostringstream os;
        os.precision(17);
        auto c = [&](cplx v) {
          if (v.imag() == 0.0) os << v.real();
          else os << "(" << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
        };
        if (n.N == 1) {
          c(n.value(0, 0));
        } else {
          os << "[";
          for (int i = 0; i < n.N; ++i) {
            os << (i ? ", [" : "[");
            for (int j = 0; j < n.N; ++j) {
              if (j) os << ", ";
              c(n.value(i, j));
            }
            os << "]";
          }
          os << "]";
        }
        return os.str();
      }
      case Kind::analytic: return n.label;
      case Kind::sampled: return "sampled";
      case Kind::sum: return "(" + W(n.a).describe() + " + " + W(n.b).describe() + ")";
      case Kind::product: return W(n.a).describe() + "*" + W(n.b).describe();
      case Kind::scaled: return CoeffField::constant(n.scale).describe() + "*" + W(n.a).describe();
      case Kind::adjoint: return "adj(" + W(n.a).describe() + ")";
      case Kind::derivative: return "D" + n.shift.str() + "(" + W(n.a).describe() + ")";
    }
    return "?";
  }

  /// D^deriv a sampled on g.
  MatField sample(const Grid& g, const MultiIndex& deriv, const Scheme& scheme) const {
    if (deriv.dim() != g.dim()) throw DimensionError("derivative index does not match grid");
    const Node& n = *node_;
    const int P = g.size();
    switch (n.kind) {
      case Kind::constant:
        if (!deriv.is_zero()) return MatField(n.N, P);
        return MatField::broadcast(n.value, P);
      case Kind::analytic: {
        if (deriv.order() <= n.max_deriv) {
          MatField out(n.N, P);
          for (int p = 0; p < P; ++p) out.at(p) = n.fn(g.coords(p), deriv);
          return out;
        }
        return delsarte::derivative(g, sample(g, MultiIndex::zero(g.dim()), scheme), deriv, scheme);
      }
      case Kind::sampled:
        if (!(*n.grid == g)) throw DimensionError("sampled coefficient lives on a different grid");
        return delsarte::derivative(g, n.samples, deriv, scheme);
      case Kind::sum: {
        MatField out = W(n.a).sample(g, deriv, scheme);
        out.data += W(n.b).sample(g, deriv, scheme).data;
        return out;
      }
      case Kind::scaled: {
        MatField out = W(n.a).sample(g, deriv, scheme);
        out.data *= n.scale;
        return out;
      }
      case Kind::adjoint: {
        MatField in = W(n.a).sample(g, deriv, scheme);
        MatField out(n.N, P);
        for (int p = 0; p < P; ++p) out.at(p) = in.at(p).adjoint();
        return out;
      }
      case Kind::derivative: return W(n.a).sample(g, deriv + n.shift, scheme);
      case Kind::product: {
        MatField out(n.N, P);
        for (const auto& gam : sub_indices(deriv)) {
          MatField fa = W(n.a).sample(g, gam, scheme);
          MatField fb = W(n.b).sample(g, deriv - gam, scheme);
          const double c = binomial(deriv, gam);
          if (n.N == 1) {
            out.data.row(0) += c * fa.data.row(0).cwiseProduct(fb.data.row(0));
          } else {
            for (int p = 0; p < P; ++p) out.at(p) += c * fa.at(p) * fb.at(p);
          }
        }
        return out;
      }
    }
    return MatField(n.N, P);
  }

  MatField sample(const Grid& g, const Scheme& scheme = Scheme::centered()) const {
    return sample(g, MultiIndex::zero(g.dim()), scheme);
  }

  CoeffField adjoint() const {
    if (is_constant()) return constant(node_->value.adjoint());
    if (node_->kind == Kind::adjoint) return W(node_->a);
    auto n = std::make_shared<Node>();
    n->kind = Kind::adjoint;
    n->N = N();
    n->a = node_;
    return CoeffField(n);
  }

  CoeffField derivative(const MultiIndex& shift) const {
    if (shift.is_zero()) return *this;
    if (is_constant()) return zero(N());
    auto n = std::make_shared<Node>();
    n->kind = Kind::derivative;
    n->N = N();
    if (node_->kind == Kind::derivative) {
      n->a = node_->a;
      n->shift = node_->shift + shift;
    } else {
      n->a = node_;
      n->shift = shift;
    }
    return CoeffField(n);
  }

  friend CoeffField operator+(const CoeffField& a, const CoeffField& b) {
    a.check(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.node_->value + b.node_->value);
    auto n = std::make_shared<Node>();
    n->kind = Kind::sum;
    n->N = a.N();
    n->a = a.node_;
    n->b = b.node_;
    return CoeffField(n);
  }
  friend CoeffField operator-(const CoeffField& a, const CoeffField& b) { return a + (-1.0) * b; }
  friend CoeffField operator*(const CoeffField& a, const CoeffField& b) {
    a.check(b);
    if (a.is_zero() || b.is_zero()) return zero(a.N());
    if (a.is_constant() && b.is_constant()) return constant(a.node_->value * b.node_->value);
    if (a.is_constant() && a.node_->value.isIdentity(0.0)) return b;
    if (b.is_constant() && b.node_->value.isIdentity(0.0)) return a;
    if (a.is_constant() && a.node_->value.isDiagonal(0.0) &&
        (a.node_->value.diagonal().array() == a.node_->value(0, 0)).all())
      return a.node_->value(0, 0) * b;
    auto n = std::make_shared<Node>();
    n->kind = Kind::product;
    n->N = a.N();
    n->a = a.node_;
    n->b = b.node_;
    return CoeffField(n);
  }
  friend CoeffField operator*(cplx s, const CoeffField& a) {
    if (s == 0.0 || a.is_zero()) return zero(a.N());
    if (s == 1.0) return a;
    if (a.is_constant()) return constant(s * a.node_->value);
    auto n = std::make_shared<Node>();
    n->kind = Kind::scaled;
    n->N = a.N();
    if (a.node_->kind == Kind::scaled) {
      n->a = a.node_->a;
      n->scale = s * a.node_->scale;
    } else {
      n->a = a.node_;
      n->scale = s;
    }
    return CoeffField(n);
  }

 private:
  enum class Kind { constant, analytic, sampled, sum, product, scaled, adjoint, derivative };
  struct Node {
    Kind kind = Kind::constant;
    int N = 1;
    Mat value;
    AnalyticFn fn;
    int max_deriv = 0;
    std::string label;
    std::shared_ptr<Grid> grid;
    MatField samples;
    std::shared_ptr<const Node> a, b;
    cplx scale = 1.0;
    MultiIndex shift;
  };

  explicit CoeffField(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static CoeffField W(const std::shared_ptr<const Node>& n) { return CoeffField(n); }
  void check(const CoeffField& o) const {
    if (o.N() != N()) throw DimensionError("coefficient size mismatch");
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace delsarte
