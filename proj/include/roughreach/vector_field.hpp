#pragma once

// Families D = {f^1,...,f^n} of vector fields on R^d, defined componentwise
// by expressions, with symbolic Jacobians and Lie brackets. Builtins cover
// the linear fields of the truncated-signature ODE, a planar rotation field
// and a two-field bracket-generating demo.

#include "roughreach/expr.hpp"
#include "roughreach/tensor.hpp"

#include <string>
#include <vector>

namespace roughreach {

using VectorField = std::vector<Expr>;  // d components

struct VectorFieldFamily {
  int dim = 0;     // ambient dimension d
  int inputs = 0;  // number of fields n (= control dimension)
  std::vector<VectorField> fields;
  std::string builtin_tag;  // empty for user-defined families

  void validate() const {
    if (dim < 1 || inputs < 1)
      throw std::invalid_argument("vector field family needs d, n >= 1");
    if (static_cast<int>(fields.size()) != inputs)
      throw std::invalid_argument("field count does not match n");
    for (const auto& f : fields)
      if (static_cast<int>(f.size()) != dim)
        throw std::invalid_argument("field component count does not match d");
  }
};

inline std::vector<double> eval_field(const VectorField& f,
                                      const std::vector<double>& y) {
  std::vector<double> v(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) v[c] = eval(f[c], y);
  return v;
}

/// Symbolic Jacobian: row c, column k holds d f_c / d y_k.
inline std::vector<VectorField> field_jacobian(const VectorField& f, int dim) {
  std::vector<VectorField> jac(f.size(), VectorField(dim));
  for (std::size_t c = 0; c < f.size(); ++c)
    for (int k = 0; k < dim; ++k) jac[c][k] = diff(f[c], k);
  return jac;
}

/// [g, h] = Dh.g - Dg.h, exact symbolic computation.
inline VectorField lie_bracket(const VectorField& g, const VectorField& h,
                               int dim) {
  VectorField out(dim, make_const(0.0));
  for (int c = 0; c < dim; ++c) {
    Expr acc = make_const(0.0);
    for (int k = 0; k < dim; ++k) {
      acc = make_binary(ExprKind::Add, acc,
                        make_binary(ExprKind::Mul, diff(h[c], k), g[k]));
      acc = make_binary(ExprKind::Sub, acc,
                        make_binary(ExprKind::Mul, diff(g[c], k), h[k]));
    }
    out[c] = acc;
  }
  return out;
}

inline VectorField lie_bracket(const VectorFieldFamily& family, int i, int j) {
  if (i < 0 || j < 0 || i >= family.inputs || j >= family.inputs)
    throw std::invalid_argument("lie_bracket field index out of range");
  return lie_bracket(family.fields[i], family.fields[j], family.dim);
}

/// Flattened dimension of T^(N)(R^n): 1 + n + ... + n^N.
inline int flattened_tensor_dim(int n, int N) {
  int d = 0;
  for (int k = 0; k <= N; ++k) d += static_cast<int>(pow_size(n, k));
  return d;
}

inline int level_offset(int n, int level) {
  int off = 0;
  for (int k = 0; k < level; ++k) off += static_cast<int>(pow_size(n, k));
  return off;
}

/// The linear fields f^i(a) = (0, a_0 e_i, ..., a_{N-1} (x) e_i) on
/// T^(N)(R^n) flattened to R^d, d = 1 + n + ... + n^N. Built directly in
/// flattened coordinates: the component at word w.i of level k is the
/// variable holding a at word w of level k-1.
inline VectorFieldFamily make_signature_ode_family(int N, int n) {
  if (N < 1 || n < 1)
    throw std::invalid_argument("signature-ode builtin needs N, n >= 1");
  VectorFieldFamily fam;
  fam.dim = flattened_tensor_dim(n, N);
  fam.inputs = n;
  fam.builtin_tag = "signature-ode " + std::to_string(N) + " " + std::to_string(n);
  fam.fields.assign(n, VectorField(fam.dim, make_const(0.0)));
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= N; ++k) {
      const int src = level_offset(n, k - 1);
      const int dst = level_offset(n, k);
      const int prev = static_cast<int>(pow_size(n, k - 1));
      // word w.i sits at index w*n + i within level k
      for (int w = 0; w < prev; ++w)
        fam.fields[i][dst + w * n + i] = make_var(src + w);
    }
  }
  return fam;
}

/// Single rotation field (-y2, y1) on R^2.
inline VectorFieldFamily make_rotation_family() {
  VectorFieldFamily fam;
  fam.dim = 2;
  fam.inputs = 1;
  fam.builtin_tag = "rotation";
  fam.fields = {{make_unary(ExprKind::Neg, make_var(1)), make_var(0)}};
  return fam;
}

/// {(1,0), (0,y1)} on R^2: two fields whose bracket (0,1) fills the plane.
inline VectorFieldFamily make_bracket_demo_family() {
  VectorFieldFamily fam;
  fam.dim = 2;
  fam.inputs = 2;
  fam.builtin_tag = "bracket-demo";
  fam.fields = {{make_const(1.0), make_const(0.0)},
                {make_const(0.0), make_var(0)}};
  return fam;
}

inline bool is_signature_ode_family(const VectorFieldFamily& fam, int* N = nullptr,
                                    int* n = nullptr) {
  if (fam.builtin_tag.rfind("signature-ode ", 0) != 0) return false;
  int depth = 0, width = 0;
  if (std::sscanf(fam.builtin_tag.c_str(), "signature-ode %d %d", &depth,
                  &width) != 2)
    return false;
  if (N) *N = depth;
  if (n) *n = width;
  return true;
}

/// Flattened vector of T^(N) coefficients, level by level.
inline std::vector<double> flatten_tensor(const TruncatedTensor& t) {
  std::vector<double> v;
  v.reserve(flattened_tensor_dim(t.width, t.depth));
  for (const auto& lv : t.levels) v.insert(v.end(), lv.begin(), lv.end());
  return v;
}

inline TruncatedTensor unflatten_tensor(const std::vector<double>& v, int n,
                                        int N) {
  TruncatedTensor t(n, N);
  std::size_t pos = 0;
  for (int k = 0; k <= N; ++k) {
    for (auto& c : t.levels[k]) {
      if (pos >= v.size())
        throw std::invalid_argument("flattened tensor too short");
      c = v[pos++];
    }
  }
  if (pos != v.size())
    throw std::invalid_argument("flattened tensor length mismatch");
  return t;
}

}  // namespace roughreach
