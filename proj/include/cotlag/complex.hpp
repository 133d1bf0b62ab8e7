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

// The deformation complex: coboundary, circle product, bracket, and the
// residuals of the product equation.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cotlag/error.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

namespace detail {

// F with block b of F replaced by the sum of target blocks in groups[b].
inline PolySymbol merge_blocks(const PolySymbol& f, const Shape& target,
                               const std::vector<std::vector<std::size_t>>& groups) {
  const Shape& s = f.shape();
  std::vector<LinearForm> images(s.var_count());
  for (std::size_t b = 0; b < s.blocks; ++b) {
    for (std::size_t i = 0; i < s.dim; ++i) {
      LinearForm form;
      for (std::size_t c : groups[b]) form.terms.emplace_back(target.p_index(c, i), 1);
      images[s.p_index(b, i)] = std::move(form);
    }
  }
  for (std::size_t i = 0; i < s.dim; ++i) images[s.x_index(i)] = LinearForm::var(target.x_index(i));
  return substitute_linear(f, target, images);
}

inline int sign_of(long exponent) { return exponent % 2 == 0 ? 1 : -1; }

inline void require_graded(const FormalSeries& f, const char* what) {
  if (!f.graded()) throw invalid_argument(std::string(what) + " needs a graded series");
  if (const auto r = check_grading(f); !r.ok()) {
    throw invalid_argument(std::string(what) + ": series violates the grading at order " +
                           std::to_string(r.violations.front().order));
  }
}

}  // namespace detail

/// dF(p_1, …, p_{n+1}, x) = F(p_1, …, p_n, x)
///   + Σ_{j=1}^n (−1)^{n+j−1} F(p_1, …, p_j + p_{j+1}, …, p_{n+1}, x)
///   + (−1)^{n−1} F(p_2, …, p_{n+1}, x),
/// applied to one symbol of arity n.
inline PolySymbol coboundary(const PolySymbol& f) {
  const std::size_t n = f.shape().blocks;
  const Shape target{f.shape().dim, n + 1};

  std::vector<std::pair<int, std::vector<std::vector<std::size_t>>>> faces;
  std::vector<std::vector<std::size_t>> first(n), last(n);
  for (std::size_t b = 0; b < n; ++b) {
    first[b] = {b};
    last[b] = {b + 1};
  }
  faces.emplace_back(1, first);
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<std::vector<std::size_t>> g(n);
    for (std::size_t b = 0; b < n; ++b) {
      if (b + 1 < j) g[b] = {b};
      else if (b + 1 == j) g[b] = {b, b + 1};
      else g[b] = {b + 1};
    }
    faces.emplace_back(detail::sign_of(static_cast<long>(n + j - 1)), std::move(g));
  }
  faces.emplace_back(detail::sign_of(static_cast<long>(n) - 1), last);

  PolySymbol sum(target);
  for (const auto& [sign, groups] : faces) {
    PolySymbol term = detail::merge_blocks(f, target, groups);
    if (sign > 0) sum += term;
    else sum -= term;
  }
  return sum;
}

/// Order-by-order coboundary of a graded series.
inline FormalSeries coboundary(const FormalSeries& f) {
  detail::require_graded(f, "coboundary");
  FormalSeries out(Shape{f.dim(), f.arity() + 1}, true);
  for (const auto& [i, poly] : f.orders()) out.set_order(i, coboundary(poly));
  return out;
}

/// F∘G = Σ_{i=1}^k (−1)^{(i−1)(l−1)} F(I, …, G, …, I) on deformation parts,
/// G in slot i, for F of arity k and G of arity l.
inline FormalSeries circ(const FormalSeries& f, const FormalSeries& g, int truncation,
                         int cap = default_truncation_cap) {
  detail::require_graded(f, "circ");
  detail::require_graded(g, "circ");
  if (f.dim() != g.dim()) throw shape_error("circ: dimensions differ");
  const std::size_t k = f.arity();
  const std::size_t l = g.arity();
  if (k == 0) throw invalid_argument("circ: outer argument must have positive arity");
  const GenFunction outer(f);
  const GenFunction inner(g);
  FormalSeries out(Shape{f.dim(), k + l - 1}, true);
  for (std::size_t i = 1; i <= k; ++i) {
    GenFunction h = insert_at(outer, i - 1, inner, truncation, cap);
    const long e = static_cast<long>(i - 1) * (static_cast<long>(l) - 1);
    if (detail::sign_of(e) > 0) out += h.deformation();
    else out -= h.deformation();
  }
  return out;
}

/// [F, G] = F∘G − (−1)^{(k−1)(l−1)} G∘F.
inline FormalSeries bracket(const FormalSeries& f, const FormalSeries& g, int truncation,
                            int cap = default_truncation_cap) {
  FormalSeries fg = circ(f, g, truncation, cap);
  FormalSeries gf = circ(g, f, truncation, cap);
  const long e = (static_cast<long>(f.arity()) - 1) * (static_cast<long>(g.arity()) - 1);
  if (detail::sign_of(e) > 0) fg -= gf;
  else fg += gf;
  return fg;
}

struct CochainReport {
  int first_order = 1;
  int last_order = 0;
  std::map<int, PolySymbol> residuals;  // nonzero residuals only
  bool all_zero = true;

  int first_failure() const { return residuals.empty() ? 0 : residuals.begin()->first; }
};

namespace detail {

inline void require_product_shape(const FormalSeries& s) {
  detail::require_graded(s, "product check");
  if (s.arity() != 2) throw invalid_argument("a product must have arity 2");
}

// S(S, I) − S(I, S) for the full functions, as a deformation series.
inline FormalSeries associator(const FormalSeries& s, int truncation, int cap) {
  const GenFunction sf(s);
  const GenFunction id = identity(s.dim());
  FormalSeries left = compose(sf, {sf, id}, truncation, cap).deformation();
  left -= compose(sf, {id, sf}, truncation, cap).deformation();
  return left;
}

}  // namespace detail

/// Residuals of S(S, I) = S(I, S) for S = S_0^2 + S̃, orders 1..N.
inline CochainReport verify_product(const FormalSeries& s, int truncation,
                                    int cap = default_truncation_cap) {
  detail::require_product_shape(s);
  CochainReport report;
  report.last_order = truncation;
  const FormalSeries assoc = detail::associator(s, truncation, cap);
  for (const auto& [i, poly] : assoc.orders()) {
    if (i > truncation) break;
    report.residuals.emplace(i, poly);
  }
  report.all_zero = report.residuals.empty();
  return report;
}

struct Obstruction {
  PolySymbol value;  // H_n, arity 3
  bool closed;       // d H_n = 0
};

/// H_n = order-n part of ½[S_{<n}, S_{<n}], so that the product equation at
/// order n reads dS_n + H_n = 0.
inline Obstruction obstruction(const FormalSeries& partial, int n,
                               int cap = default_truncation_cap) {
  detail::require_product_shape(partial);
  if (n < 1) throw invalid_argument("obstruction order must be positive");
  const Shape arity3{partial.dim(), 3};
  if (n == 1) return {PolySymbol(arity3), true};
  const FormalSeries lower = partial.truncated(n - 1);
  const FormalSeries assoc = detail::associator(lower, n, cap);
  for (int i = 1; i < n; ++i) {
    if (!assoc.order(i).is_zero()) {
      throw verification_error("partial series is not a product: residual at order " +
                               std::to_string(i));
    }
  }
  PolySymbol h = assoc.order(n);
  const bool closed = coboundary(h).is_zero();
  return {std::move(h), closed};
}

}  // namespace cotlag
