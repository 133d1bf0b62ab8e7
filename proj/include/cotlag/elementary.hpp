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

// Elementary differentials DC_t(F, G) and elementary functions C_t(F, G).
//
// Black vertices of weight j stand for F^{(j)} differentiated in its
// p-slot, white vertices of weight i for G^{(i)} differentiated in its
// x-slot. Both families live in a work layout in which the differentiated
// variables are private copies; after each contraction the result is
// mapped to the target layout (the evaluation point). Direction vectors are
// always target-layout polynomials, so a contraction can be computed as a
// chain of directional derivatives.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cotlag/symbols.hpp"
#include "cotlag/trees.hpp"

namespace cotlag {

/// Which variables a vector-valued DC pairs against. A black-rooted DC is a
/// value of ∇_p F, an x-slot vector; a white-rooted DC is a p-slot vector.
enum class Slot { p, x };

struct SlotVector {
  Slot slot = Slot::p;
  std::vector<PolySymbol> components;

  bool is_zero() const {
    for (const auto& c : components) {
      if (!c.is_zero()) return false;
    }
    return true;
  }
};

/// ⟨a, b⟩ for vectors of opposite slots.
inline PolySymbol pair(const SlotVector& a, const SlotVector& b) {
  if (a.slot == b.slot) throw invalid_argument("pairing needs a p-slot and an x-slot vector");
  if (a.components.size() != b.components.size() || a.components.empty()) {
    throw shape_error("pairing vectors of different lengths");
  }
  PolySymbol out(a.components.front().shape());
  for (std::size_t k = 0; k < a.components.size(); ++k) out += a.components[k] * b.components[k];
  return out;
}

/// Everything an evaluator needs: the two families in a common work layout,
/// their differentiated variables, and the map to the target layout.
struct TreeContext {
  Shape work;
  Shape target;
  std::map<int, PolySymbol> black;         // F^{(j)}
  std::map<int, PolySymbol> white;         // G^{(i)}
  std::vector<std::size_t> black_vars;     // p-slot variables of F
  std::vector<std::size_t> white_vars;     // x-slot variables of G, same length
  std::vector<LinearForm> to_target;       // one image per work variable
  std::vector<std::size_t> embed;          // target variable -> work variable
};

class ElementaryEvaluator {
 public:
  explicit ElementaryEvaluator(TreeContext ctx) : ctx_(std::move(ctx)) {
    if (ctx_.black_vars.size() != ctx_.white_vars.size()) {
      throw shape_error("black and white slots must have the same length");
    }
    if (ctx_.to_target.size() != ctx_.work.var_count() ||
        ctx_.embed.size() != ctx_.target.var_count()) {
      throw shape_error("tree context maps do not match the layouts");
    }
    std::set<std::size_t> slot_vars(ctx_.black_vars.begin(), ctx_.black_vars.end());
    slot_vars.insert(ctx_.white_vars.begin(), ctx_.white_vars.end());
    for (std::size_t v : ctx_.embed) {
      if (slot_vars.count(v) != 0) {
        throw invalid_argument("target variables must not alias differentiated variables");
      }
    }
    for (const auto* family : {&ctx_.black, &ctx_.white}) {
      for (const auto& [order, f] : *family) {
        if (f.shape() != ctx_.work) throw shape_error("tree family member not in the work layout");
      }
    }
  }

  const TreeContext& context() const noexcept { return ctx_; }

  /// DC_t, in the target layout.
  const SlotVector& differential(const RootedTree& t) { return entry(t).target; }

  /// C_t, in the target layout.
  PolySymbol function(const RootedTree& t) {
    auto h = contracted(t);
    return h ? to_target(*h) : PolySymbol(ctx_.target);
  }

  PolySymbol function(const TopTree& t) { return function(t.canonical()); }

 private:
  struct Entry {
    SlotVector target;
    std::vector<PolySymbol> work;  // target components embedded back
  };

  PolySymbol to_target(const PolySymbol& f) const {
    return substitute_linear(f, ctx_.target, ctx_.to_target);
  }

  const std::vector<std::size_t>& slot_vars(Color c) const {
    return c == Color::black ? ctx_.black_vars : ctx_.white_vars;
  }

  // D_{u_1}⋯D_{u_m} f_root in the work layout, or nothing when some factor
  // vanishes identically.
  std::optional<PolySymbol> contracted(const RootedTree& t) {
    const auto& family = t.color() == Color::black ? ctx_.black : ctx_.white;
    auto it = family.find(static_cast<int>(t.weight()));
    if (it == family.end() || it->second.is_zero()) return std::nullopt;
    const auto& vars = slot_vars(t.color());

    PolySymbol h = it->second;
    for (const auto& child : t.children()) {
      const Entry& u = entry(child);
      if (u.target.is_zero()) return std::nullopt;
      PolySymbol next(ctx_.work);
      for (std::size_t a = 0; a < vars.size(); ++a) {
        if (u.work[a].is_zero()) continue;
        PolySymbol dh = h.derivative(vars[a]);
        if (!dh.is_zero()) next += u.work[a] * dh;
      }
      if (next.is_zero()) return std::nullopt;
      h = std::move(next);
    }
    return h;
  }

  const Entry& entry(const RootedTree& t) {
    if (auto it = memo_.find(t.encoding()); it != memo_.end()) return it->second;
    const auto& vars = slot_vars(t.color());
    Entry e;
    e.target.slot = t.color() == Color::black ? Slot::x : Slot::p;
    auto h = contracted(t);
    for (std::size_t a = 0; a < vars.size(); ++a) {
      PolySymbol component = h ? to_target(h->derivative(vars[a])) : PolySymbol(ctx_.target);
      e.work.push_back(rename(component, ctx_.work, ctx_.embed));
      e.target.components.push_back(std::move(component));
    }
    return memo_.emplace(t.encoding(), std::move(e)).first->second;
  }

  TreeContext ctx_;
  std::map<std::string, Entry> memo_;
};

/// F = {F^{(j)}} read as functions of p, G = {G^{(i)}} as functions of x,
/// over a common flattened dimension m. Both are arity-1 series; the other
/// variable of each acts as a parameter.
struct SeriesPair {
  FormalSeries F;
  FormalSeries G;
};

namespace detail {

// Work layout {m, 3}: block 0 = target p, block 1 = F's p, block 2 = G's x
// (stored as a pseudo p-block), then target x.
inline TreeContext pair_context(const SeriesPair& data) {
  const Shape s = data.F.shape();
  if (s.blocks != 1 || data.G.shape() != s) {
    throw shape_error("SeriesPair needs two arity-1 series over the same dimension");
  }
  const std::size_t m = s.dim;
  TreeContext ctx;
  ctx.target = s;
  ctx.work = Shape{m, 3};
  const Shape& w = ctx.work;

  std::vector<std::size_t> f_image(s.var_count()), g_image(s.var_count());
  for (std::size_t i = 0; i < m; ++i) {
    f_image[s.p_index(0, i)] = w.p_index(1, i);
    f_image[s.x_index(i)] = w.x_index(i);
    g_image[s.p_index(0, i)] = w.p_index(0, i);
    g_image[s.x_index(i)] = w.p_index(2, i);
    ctx.black_vars.push_back(w.p_index(1, i));
    ctx.white_vars.push_back(w.p_index(2, i));
  }
  for (const auto& [j, f] : data.F.orders()) ctx.black.emplace(j, rename(f, w, f_image));
  for (const auto& [i, g] : data.G.orders()) ctx.white.emplace(i, rename(g, w, g_image));

  ctx.to_target.resize(w.var_count());
  for (std::size_t i = 0; i < m; ++i) {
    ctx.to_target[w.p_index(0, i)] = LinearForm::var(s.p_index(0, i));
    ctx.to_target[w.p_index(1, i)] = LinearForm::var(s.p_index(0, i));
    ctx.to_target[w.p_index(2, i)] = LinearForm::var(s.x_index(i));
    ctx.to_target[w.x_index(i)] = LinearForm::var(s.x_index(i));
  }
  ctx.embed.resize(s.var_count());
  for (std::size_t i = 0; i < m; ++i) {
    ctx.embed[s.p_index(0, i)] = w.p_index(0, i);
    ctx.embed[s.x_index(i)] = w.x_index(i);
  }
  return ctx;
}

}  // namespace detail

inline SlotVector elementary_differential(const RootedTree& t, const SeriesPair& data) {
  ElementaryEvaluator ev(detail::pair_context(data));
  return ev.differential(t);
}

inline PolySymbol elementary_function(const RootedTree& t, const SeriesPair& data) {
  ElementaryEvaluator ev(detail::pair_context(data));
  return ev.function(t);
}

/// C_t of an unrooted class, computed at its canonical root.
inline PolySymbol elementary_function(const TopTree& t, const SeriesPair& data) {
  return elementary_function(t.canonical(), data);
}

/// Evaluator over a SeriesPair, for computing many trees with shared memo.
inline ElementaryEvaluator make_evaluator(const SeriesPair& data) {
  return ElementaryEvaluator(detail::pair_context(data));
}

}  // namespace cotlag
