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

// Generating functions S_0^n + S̃ of the formal cotangent Lagrangian operad
// and their composition by tree expansion.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cotlag/elementary.hpp"
#include "cotlag/symbols.hpp"
#include "cotlag/trees.hpp"

namespace cotlag {

inline constexpr int default_truncation_cap = 8;

/// S = S_0^n + S̃ with S_0^n(p, x) = (p_1 + … + p_n)·x and S̃ a graded
/// deformation series of arity n.
class GenFunction {
 public:
  GenFunction(std::size_t arity, std::size_t dim) : deformation_(Shape{dim, arity}, true) {
    if (dim == 0) throw invalid_argument("dimension must be positive");
  }

  explicit GenFunction(FormalSeries deformation) : deformation_(std::move(deformation)) {
    if (deformation_.dim() == 0) throw invalid_argument("dimension must be positive");
    if (!deformation_.graded()) {
      throw invalid_argument("a generating function needs a graded deformation series");
    }
    const auto report = check_grading(deformation_);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw invalid_argument("deformation violates the grading at order " +
                             std::to_string(v.order) + ": monomial " +
                             format_monomial(deformation_.shape(), v.monomial) + " has p-degree " +
                             std::to_string(v.p_degree));
    }
  }

  std::size_t arity() const noexcept { return deformation_.arity(); }
  std::size_t dim() const noexcept { return deformation_.dim(); }
  const Shape& shape() const noexcept { return deformation_.shape(); }
  const FormalSeries& deformation() const noexcept { return deformation_; }

  /// S_0^n as a polynomial.
  PolySymbol trivial_part() const {
    const Shape& s = shape();
    PolySymbol out(s);
    for (std::size_t b = 0; b < s.blocks; ++b) {
      for (std::size_t i = 0; i < s.dim; ++i) out += PolySymbol::p(s, b, i) * PolySymbol::x(s, i);
    }
    return out;
  }

  /// S_0^n + Σ_{i<=N} ε^i S̃^{(i)} at an exact point.
  Rational evaluate(std::span<const Rational> point, const Rational& eps, int truncation) const {
    return eval(trivial_part(), point) + series_eval(deformation_, point, eps, truncation);
  }

  friend bool operator==(const GenFunction& a, const GenFunction& b) {
    return a.deformation_ == b.deformation_;
  }

 private:
  FormalSeries deformation_;
};

/// I(p, x) = p·x, the operad unit.
inline GenFunction identity(std::size_t dim) { return GenFunction(1, dim); }

/// S_0^n with zero deformation.
inline GenFunction trivial_product(std::size_t arity, std::size_t dim) {
  return GenFunction(arity, dim);
}

namespace detail {

inline std::uint64_t order_mask(const FormalSeries& f, int truncation) {
  std::uint64_t mask = 0;
  for (const auto& [i, poly] : f.orders()) {
    if (i <= truncation && i <= 64) mask |= std::uint64_t{1} << (i - 1);
  }
  return mask;
}

// Work layout for F(G_1, …, G_n): blocks [0, K) hold p_G, [K, K+n) hold
// p_F and [K+n, K+2n) hold x_G; the x variables are x_F. The target layout
// is the result's (p_G, x_F).
inline TreeContext composition_context(const GenFunction& outer,
                                       std::span<const GenFunction> inner, int truncation) {
  const std::size_t d = outer.dim();
  const std::size_t n = outer.arity();
  std::vector<std::size_t> offset(n);
  std::size_t total = 0;
  for (std::size_t l = 0; l < n; ++l) {
    offset[l] = total;
    total += inner[l].arity();
  }

  TreeContext ctx;
  ctx.target = Shape{d, total};
  ctx.work = Shape{d, total + 2 * n};
  const Shape& w = ctx.work;
  auto p_f = [&](std::size_t b, std::size_t i) { return w.p_index(total + b, i); };
  auto x_g = [&](std::size_t l, std::size_t i) { return w.p_index(total + n + l, i); };

  const Shape& fs = outer.shape();
  std::vector<std::size_t> f_image(fs.var_count());
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < d; ++i) f_image[fs.p_index(b, i)] = p_f(b, i);
  }
  for (std::size_t i = 0; i < d; ++i) f_image[fs.x_index(i)] = w.x_index(i);
  for (const auto& [j, f] : outer.deformation().orders()) {
    if (j <= truncation) ctx.black.emplace(j, rename(f, w, f_image));
  }

  for (std::size_t l = 0; l < n; ++l) {
    const Shape& gs = inner[l].shape();
    std::vector<std::size_t> g_image(gs.var_count());
    for (std::size_t c = 0; c < gs.blocks; ++c) {
      for (std::size_t i = 0; i < d; ++i) g_image[gs.p_index(c, i)] = w.p_index(offset[l] + c, i);
    }
    for (std::size_t i = 0; i < d; ++i) g_image[gs.x_index(i)] = x_g(l, i);
    for (const auto& [i, g] : inner[l].deformation().orders()) {
      if (i > truncation) continue;
      auto [it, inserted] = ctx.white.try_emplace(i, w);
      it->second += rename(g, w, g_image);
    }
  }
  std::erase_if(ctx.white, [](const auto& kv) { return kv.second.is_zero(); });

  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < d; ++i) {
      ctx.black_vars.push_back(p_f(b, i));
      ctx.white_vars.push_back(x_g(b, i));
    }
  }

  // Base point: p_F[b] = Σ_{c in block group b} p_G[c], x_G[l] = x_F.
  const Shape& t = ctx.target;
  ctx.to_target.resize(w.var_count());
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t i = 0; i < d; ++i) ctx.to_target[w.p_index(c, i)] = LinearForm::var(t.p_index(c, i));
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < d; ++i) {
      LinearForm sum;
      for (std::size_t c = offset[b]; c < offset[b] + inner[b].arity(); ++c) {
        sum.terms.emplace_back(t.p_index(c, i), 1);
      }
      ctx.to_target[p_f(b, i)] = std::move(sum);
      ctx.to_target[x_g(b, i)] = LinearForm::var(t.x_index(i));
    }
  }
  for (std::size_t i = 0; i < d; ++i) ctx.to_target[w.x_index(i)] = LinearForm::var(t.x_index(i));

  ctx.embed.resize(t.var_count());
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t i = 0; i < d; ++i) ctx.embed[t.p_index(c, i)] = w.p_index(c, i);
  }
  for (std::size_t i = 0; i < d; ++i) ctx.embed[t.x_index(i)] = w.x_index(i);
  return ctx;
}

inline void check_composable(const GenFunction& outer, std::span<const GenFunction> inner,
                             int truncation, int cap) {
  if (inner.size() != outer.arity()) {
    throw invalid_argument("outer function has arity " + std::to_string(outer.arity()) + " but " +
                           std::to_string(inner.size()) + " inner functions were given");
  }
  for (const auto& g : inner) {
    if (g.dim() != outer.dim()) {
      throw shape_error("inner function has dimension " + std::to_string(g.dim()) +
                        ", outer has " + std::to_string(outer.dim()));
    }
  }
  if (truncation < 0) throw invalid_argument("truncation order must be non-negative");
  if (truncation > cap) {
    throw invalid_argument("truncation order " + std::to_string(truncation) +
                           " exceeds the configured cap " + std::to_string(cap));
  }
}

}  // namespace detail

/// F(G_1, …, G_n) truncated at order N:
///
///   S̃_result = Σ_{t, ‖t‖ <= N} ε^{‖t‖}/|sym(t)| · C_t(F(·, x_F), G_1∪…∪G_n(p_G, ·))
///
/// summed over unrooted weighted bipartite trees and evaluated at
/// p_F = (p_{G_1}^Σ, …, p_{G_n}^Σ), x_G = (x_F, …, x_F).
inline GenFunction compose(const GenFunction& outer, std::span<const GenFunction> inner,
                           int truncation, int cap = default_truncation_cap) {
  detail::check_composable(outer, inner, truncation, cap);
  TreeContext ctx = detail::composition_context(outer, inner, truncation);
  const Shape target = ctx.target;
  FormalSeries result(target, true);
  if (truncation == 0) return GenFunction(std::move(result));

  WeightFilter filter{0, 0};
  filter.black = detail::order_mask(outer.deformation(), truncation);
  for (const auto& g : inner) filter.white |= detail::order_mask(g.deformation(), truncation);
  const unsigned tree_cap = std::max<unsigned>(static_cast<unsigned>(cap), default_tree_weight_cap);
  const auto trees = enumerate_unrooted(static_cast<unsigned>(truncation), tree_cap, filter);

  ElementaryEvaluator ev(std::move(ctx));
  for (const auto& t : trees) {
    PolySymbol c = ev.function(t);
    if (c.is_zero()) continue;
    c *= Rational(1, static_cast<unsigned long>(t.symmetry()));
    result.add_to_order(static_cast<int>(t.total_weight()), c);
  }

  if (const auto report = check_grading(result); !report.ok()) {
    throw verification_error("composition produced an ungraded term at order " +
                             std::to_string(report.violations.front().order));
  }
  return GenFunction(std::move(result));
}

inline GenFunction compose(const GenFunction& outer, std::initializer_list<GenFunction> inner,
                           int truncation, int cap = default_truncation_cap) {
  return compose(outer, std::span<const GenFunction>(inner.begin(), inner.size()), truncation, cap);
}

/// Partial composition F(I, …, G, …, I) with G in position `slot` (0-based).
inline GenFunction insert_at(const GenFunction& outer, std::size_t slot, const GenFunction& g,
                             int truncation, int cap = default_truncation_cap) {
  if (slot >= outer.arity()) throw invalid_argument("insertion slot out of range");
  std::vector<GenFunction> inner(outer.arity(), identity(outer.dim()));
  inner[slot] = g;
  return compose(outer, inner, truncation, cap);
}

}  // namespace cotlag
