// Copyright 2026 The cotlag Authors.
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

// Symplectic groupoid data attached to a product: SGS conditions, the
// induced bivector, structure maps, and equivalence transformations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cotlag/complex.hpp"
#include "cotlag/error.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/oracle.hpp"
#include "cotlag/poisson.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

enum class SgsCondition { left_zero, right_zero, inverse };

inline std::string to_string(SgsCondition c) {
  switch (c) {
    case SgsCondition::left_zero: return "S(p,0,x) = px";
    case SgsCondition::right_zero: return "S(0,p,x) = px";
    case SgsCondition::inverse: return "S(p,-p,x) = 0";
  }
  return "?";
}

struct SgsFailure {
  int order;
  SgsCondition condition;
  PolySymbol residual;  // arity 1
};

struct SgsReport {
  std::vector<SgsFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

namespace detail {

// f(a·p, b·p, x) for an arity-2 symbol, as an arity-1 symbol.
inline PolySymbol restrict_diagonal(const PolySymbol& f, int a, int b) {
  const Shape& s = f.shape();
  const Shape t{s.dim, 1};
  std::vector<LinearForm> images(s.var_count());
  for (std::size_t i = 0; i < s.dim; ++i) {
    images[s.p_index(0, i)] = a == 0 ? LinearForm::zero() : LinearForm::var(t.p_index(0, i), a);
    images[s.p_index(1, i)] = b == 0 ? LinearForm::zero() : LinearForm::var(t.p_index(0, i), b);
    images[s.x_index(i)] = LinearForm::var(t.x_index(i));
  }
  return substitute_linear(f, t, images);
}

}  // namespace detail

/// S̃(p,0,x) = S̃(0,p,x) = S̃(p,−p,x) = 0, order by order up to N.
inline SgsReport check_sgs(const FormalSeries& s, int truncation) {
  detail::require_product_shape(s);
  SgsReport r;
  for (const auto& [i, poly] : s.orders()) {
    if (i > truncation) break;
    const std::pair<SgsCondition, PolySymbol> checks[] = {
        {SgsCondition::left_zero, detail::restrict_diagonal(poly, 1, 0)},
        {SgsCondition::right_zero, detail::restrict_diagonal(poly, 0, 1)},
        {SgsCondition::inverse, detail::restrict_diagonal(poly, 1, -1)},
    };
    for (const auto& [c, residual] : checks) {
      if (!residual.is_zero()) r.failures.push_back({i, c, residual});
    }
  }
  return r;
}

/// α^{kl}(x) = 2 ∂²S̃^{(1)}/∂p_1^k ∂p_2^l.
inline PoissonStructure extract_poisson(const FormalSeries& s) {
  detail::require_product_shape(s);
  const std::size_t d = s.dim();
  const Shape& sh = s.shape();
  PoissonStructure alpha(d);
  const PolySymbol first = s.order(1);
  const Shape xs{d, 0};
  std::vector<std::vector<PolySymbol>> m(d, std::vector<PolySymbol>(d, PolySymbol(xs)));
  for (const auto& [e, c] : first.terms()) {
    std::size_t k = d, l = d;
    bool mixed = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (e[sh.p_index(0, i)] == 1 && k == d) k = i;
      else if (e[sh.p_index(0, i)] != 0) mixed = false;
      if (e[sh.p_index(1, i)] == 1 && l == d) l = i;
      else if (e[sh.p_index(1, i)] != 0) mixed = false;
    }
    if (!mixed || k == d || l == d) continue;
    Exponents xe(d, 0);
    for (std::size_t i = 0; i < d; ++i) xe[i] = e[sh.x_index(i)];
    m[k][l].add_term(xe, 2 * c);
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      if (!(m[k][l] + m[l][k]).is_zero()) {
        throw verification_error("induced bivector is not antisymmetric at (" +
                                 std::to_string(k + 1) + "," + std::to_string(l + 1) + ")");
      }
      if (k < l) alpha.set(k, l, m[k][l]);
    }
  }
  return alpha;
}

/// s(p,x) = x + ∇_{p_2}S̃(p,0,x), t(p,x) = x + ∇_{p_1}S̃(0,p,x). The x
/// term is implicit; `source[i]` and `target[i]` hold the ε-corrections of
/// component i as ungraded arity-1 series. Unit (p,x) ↦ (0,x) and inverse
/// (p,x) ↦ (−p,x) are fixed.
struct StructureMaps {
  std::vector<FormalSeries> source;
  std::vector<FormalSeries> target;

  static std::vector<Rational> unit(std::span<const Rational> px) {
    std::vector<Rational> out(px.begin(), px.end());
    for (std::size_t i = 0; i < out.size() / 2; ++i) out[i] = 0;
    return out;
  }
  static std::vector<Rational> inverse(std::span<const Rational> px) {
    std::vector<Rational> out(px.begin(), px.end());
    for (std::size_t i = 0; i < out.size() / 2; ++i) out[i] = -out[i];
    return out;
  }
};

inline StructureMaps structure_maps(const FormalSeries& s, int truncation) {
  if (const auto r = check_sgs(s, truncation); !r.ok()) {
    throw verification_error("series fails " + to_string(r.failures.front().condition) +
                             " at order " + std::to_string(r.failures.front().order));
  }
  const std::size_t d = s.dim();
  const Shape& sh = s.shape();
  const Shape one{d, 1};
  StructureMaps maps;
  maps.source.assign(d, FormalSeries(one, false));
  maps.target.assign(d, FormalSeries(one, false));
  for (const auto& [n, poly] : s.orders()) {
    if (n > truncation) break;
    for (std::size_t i = 0; i < d; ++i) {
      maps.source[i].set_order(n, detail::restrict_diagonal(poly.derivative(sh.p_index(1, i)), 1, 0));
      maps.target[i].set_order(n, detail::restrict_diagonal(poly.derivative(sh.p_index(0, i)), 0, 1));
    }
  }
  return maps;
}

/// G̃ with F(G) = I to order N, built order by order: the order-n part of
/// F(G) is F̃_n + G̃_n + terms of lower orders.
inline FormalSeries invert_morphism(const FormalSeries& f, int truncation,
                                    int cap = default_truncation_cap) {
  detail::require_graded(f, "invert_morphism");
  if (f.arity() != 1) throw invalid_argument("a morphism must have arity 1");
  const GenFunction F(f);
  FormalSeries g(f.shape(), true);
  for (int n = 1; n <= truncation; ++n) {
    const GenFunction G(g);
    const PolySymbol excess = compose(F, {G}, n, cap).deformation().order(n);
    g.add_to_order(n, -excess);
  }
  return g;
}

/// F(S)(F⁻¹, F⁻¹) for a product S and a morphism F.
inline FormalSeries transform_product(const FormalSeries& s, const FormalSeries& f,
                                      int truncation, int cap = default_truncation_cap) {
  detail::require_product_shape(s);
  detail::require_graded(f, "transform_product");
  if (f.arity() != 1) throw invalid_argument("a morphism must have arity 1");
  if (f.dim() != s.dim()) throw shape_error("morphism and product dimensions differ");
  const GenFunction F(f);
  const GenFunction G(invert_morphism(f, truncation, cap));
  const GenFunction fs = compose(F, {GenFunction(s)}, truncation, cap);
  return compose(fs, {G, G}, truncation, cap).deformation();
}

template <class Real = long double>
struct PsiResult {
  std::vector<Real> p;
  std::vector<Real> x;
  int iterations;
};

/// ψ_F(p_1, x_1) = (p_2, x_2) with x_1 = ∇_pF(p_1, x_2), p_2 = ∇_xF(p_1, x_2)
/// for F = p·x + F̃_ε.
template <class Real = long double>
PsiResult<Real> psi_numeric(const FormalSeries& f, std::span<const Real> p1,
                            std::span<const Real> x1, Real eps,
                            const OracleOptions<Real>& opt = {}) {
  detail::check_oracle_eps(eps, opt);
  if (f.arity() != 1) throw invalid_argument("a morphism must have arity 1");
  const std::size_t d = f.dim();
  if (p1.size() != d || x1.size() != d) throw shape_error("psi point has wrong size");
  const Shape& s = f.shape();
  const NumericSeries<Real> F(f);

  std::vector<Real> arg(s.var_count());
  for (std::size_t i = 0; i < d; ++i) {
    detail::require_finite(p1[i], "psi point");
    detail::require_finite(x1[i], "psi point");
    arg[s.p_index(0, i)] = p1[i];
    arg[s.x_index(i)] = x1[i];
  }
  PsiResult<Real> out{std::vector<Real>(d), std::vector<Real>(d), 0};
  bool converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Real change = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const Real next = x1[i] - F.partial(arg, eps, s.p_index(0, i));
      detail::require_finite(next, "psi iteration");
      Real& cur = arg[s.x_index(i)];
      const Real updated = cur + opt.damping * (next - cur);
      change = std::max(change, std::abs(updated - cur));
      cur = updated;
    }
    out.iterations = it;
    if (change <= opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw convergence_error("psi iteration did not converge");
  for (std::size_t i = 0; i < d; ++i) {
    out.x[i] = arg[s.x_index(i)];
    out.p[i] = p1[i] + F.partial(arg, eps, s.x_index(i));
  }
  return out;
}

}  // namespace cotlag
