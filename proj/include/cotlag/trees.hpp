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

// Weighted bipartite trees: construction, canonical encodings, symmetry
// coefficients, re-rooting and enumeration.
//
// A vertex is white (paired with the inner series G) or black (paired with
// the outer series F) and carries a positive integer weight, its ε-order.
// Adjacent vertices always have different colors. Children are kept sorted
// by canonical encoding, so two rooted trees compare equal exactly when
// they are isomorphic.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cotlag/error.hpp"

namespace cotlag {

enum class Color : std::uint8_t { white, black };

constexpr Color opposite(Color c) noexcept {
  return c == Color::white ? Color::black : Color::white;
}

constexpr char color_letter(Color c) noexcept { return c == Color::white ? 'w' : 'b'; }

inline constexpr unsigned default_tree_weight_cap = 10;
inline constexpr std::size_t brute_force_vertex_limit = 10;

class RootedTree {
 public:
  static RootedTree leaf(Color color, unsigned weight) { return graft({}, color, weight); }

  static RootedTree graft(std::vector<RootedTree> children, Color color, unsigned weight) {
    if (weight == 0) throw invalid_argument("tree vertex weight must be >= 1");
    for (const auto& child : children) {
      if (child.color() == color) {
        throw invalid_argument("bipartite violation: child " + child.encoding() +
                               " has the same color as its parent");
      }
    }
    std::sort(children.begin(), children.end(),
              [](const RootedTree& a, const RootedTree& b) { return a.encoding() < b.encoding(); });

    auto node = std::make_shared<Node>();
    node->color = color;
    node->weight = weight;
    node->vertices = 1;
    node->total_weight = weight;
    node->encoding.push_back(color_letter(color));
    node->encoding += std::to_string(weight);
    if (!children.empty()) {
      node->encoding.push_back('(');
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) node->encoding.push_back(',');
        node->encoding += children[i].encoding();
        node->vertices += children[i].vertex_count();
        node->total_weight += children[i].total_weight();
      }
      node->encoding.push_back(')');
    }
    node->children = std::move(children);
    return RootedTree(std::move(node));
  }

  Color color() const noexcept { return node_->color; }
  unsigned weight() const noexcept { return node_->weight; }
  std::span<const RootedTree> children() const noexcept { return node_->children; }
  bool is_leaf() const noexcept { return node_->children.empty(); }

  /// Canonical text form, e.g. `b2(w1,w1(b3))`.
  const std::string& encoding() const noexcept { return node_->encoding; }

  /// |t|
  std::size_t vertex_count() const noexcept { return node_->vertices; }
  /// ‖t‖, the sum of vertex weights.
  unsigned total_weight() const noexcept { return node_->total_weight; }

  friend bool operator==(const RootedTree& a, const RootedTree& b) noexcept {
    return a.encoding() == b.encoding();
  }
  friend std::strong_ordering operator<=>(const RootedTree& a, const RootedTree& b) noexcept {
    return a.encoding() <=> b.encoding();
  }

 private:
  struct Node {
    Color color{};
    unsigned weight = 1;
    std::vector<RootedTree> children;
    std::string encoding;
    std::size_t vertices = 1;
    unsigned total_weight = 1;
  };

  explicit RootedTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline const std::string& canonical_encoding(const RootedTree& t) { return t.encoding(); }

/// Parses the text produced by canonical_encoding. Children may appear in
/// any order; the result is canonical.
inline RootedTree parse_tree(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> invalid_argument {
    return invalid_argument("malformed tree encoding '" + std::string(text) + "' at offset " +
                            std::to_string(pos) + ": " + what);
  };
  auto parse = [&](auto&& self) -> RootedTree {
    if (pos >= text.size()) throw fail("unexpected end");
    Color color;
    if (text[pos] == 'w') {
      color = Color::white;
    } else if (text[pos] == 'b') {
      color = Color::black;
    } else {
      throw fail("expected 'w' or 'b'");
    }
    ++pos;
    unsigned weight = 0;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      weight = weight * 10 + static_cast<unsigned>(text[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0) throw fail("expected a weight");
    std::vector<RootedTree> children;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      children.push_back(self(self));
      while (pos < text.size() && text[pos] == ',') {
        ++pos;
        children.push_back(self(self));
      }
      if (pos >= text.size() || text[pos] != ')') throw fail("expected ')'");
      ++pos;
    }
    return RootedTree::graft(std::move(children), color, weight);
  };
  RootedTree t = parse(parse);
  if (pos != text.size()) throw fail("trailing characters");
  return t;
}

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t k = 2; k <= n; ++k) r *= k;
  return r;
}

/// σ(t) = Π μ_i! · Π_children σ(child); equals the number of root-fixing
/// automorphisms.
inline std::uint64_t symmetry_coefficient(const RootedTree& t) {
  std::uint64_t sigma = 1;
  auto children = t.children();
  std::size_t run = 0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    run = (i > 0 && children[i] == children[i - 1]) ? run + 1 : 1;
    sigma *= run;  // accumulates μ! one factor at a time
    sigma *= symmetry_coefficient(children[i]);
  }
  return sigma;
}

/// Butcher product u∘v: v grafted as an extra child of u's root.
inline RootedTree butcher_product(const RootedTree& u, const RootedTree& v) {
  if (u.color() == v.color()) {
    throw invalid_argument("Butcher product needs opposite root colors: " + u.encoding() + " o " +
                           v.encoding());
  }
  std::vector<RootedTree> children(u.children().begin(), u.children().end());
  children.push_back(v);
  return RootedTree::graft(std::move(children), u.color(), u.weight());
}

/// Explicit vertex/edge form of a tree; vertex 0 is the root of the tree it
/// was built from.
struct LabeledTree {
  std::vector<Color> colors;
  std::vector<unsigned> weights;
  std::vector<std::vector<std::size_t>> adjacency;
  std::size_t root = 0;

  std::size_t size() const noexcept { return colors.size(); }
};

inline LabeledTree to_labeled(const RootedTree& t) {
  LabeledTree out;
  auto visit = [&](auto&& self, const RootedTree& node, std::optional<std::size_t> parent) -> void {
    const std::size_t id = out.colors.size();
    out.colors.push_back(node.color());
    out.weights.push_back(node.weight());
    out.adjacency.emplace_back();
    if (parent) {
      out.adjacency[*parent].push_back(id);
      out.adjacency[id].push_back(*parent);
    }
    for (const auto& child : node.children()) self(self, child, id);
  };
  visit(visit, t, std::nullopt);
  return out;
}

inline RootedTree rooted_at(const LabeledTree& t, std::size_t root) {
  auto build = [&](auto&& self, std::size_t v, std::size_t parent) -> RootedTree {
    std::vector<RootedTree> children;
    for (std::size_t w : t.adjacency[v]) {
      if (w != parent) children.push_back(self(self, w, v));
    }
    return RootedTree::graft(std::move(children), t.colors[v], t.weights[v]);
  };
  return build(build, root, t.size());
}

/// Isomorphism class of an unrooted weighted bipartite tree.
class TopTree {
 public:
  TopTree(RootedTree canonical, std::uint64_t symmetry)
      : canonical_(std::move(canonical)), symmetry_(symmetry) {}

  /// The rooting whose encoding is lexicographically smallest.
  const RootedTree& canonical() const noexcept { return canonical_; }
  const std::string& encoding() const noexcept { return canonical_.encoding(); }
  std::size_t vertex_count() const noexcept { return canonical_.vertex_count(); }
  unsigned total_weight() const noexcept { return canonical_.total_weight(); }
  /// |sym(t)| of the unrooted tree.
  std::uint64_t symmetry() const noexcept { return symmetry_; }

  friend bool operator==(const TopTree& a, const TopTree& b) noexcept {
    return a.encoding() == b.encoding();
  }
  friend std::strong_ordering operator<=>(const TopTree& a, const TopTree& b) noexcept {
    return a.encoding() <=> b.encoding();
  }

 private:
  RootedTree canonical_;
  std::uint64_t symmetry_;
};

/// Distinct re-rootings of t (one representative per isomorphism class),
/// each with the number of vertices producing it.
inline std::vector<std::pair<RootedTree, std::size_t>> rerootings(const RootedTree& t) {
  const LabeledTree labeled = to_labeled(t);
  std::map<std::string, std::pair<RootedTree, std::size_t>> classes;
  for (std::size_t v = 0; v < labeled.size(); ++v) {
    RootedTree r = rooted_at(labeled, v);
    auto [it, inserted] = classes.try_emplace(r.encoding(), r, 0);
    ++it->second.second;
  }
  std::vector<std::pair<RootedTree, std::size_t>> out;
  out.reserve(classes.size());
  for (auto& [_, entry] : classes) out.push_back(std::move(entry));
  return out;
}

/// Unrooted class of t. The symmetry count follows from the orbit of the
/// canonical root: |sym(t)| = σ(t_v) · #{v' : t_v' ≅ t_v}.
inline TopTree forget_root(const RootedTree& t) {
  auto classes = rerootings(t);
  auto& [canonical, orbit] = classes.front();
  return TopTree(canonical, symmetry_coefficient(canonical) * orbit);
}

inline std::uint64_t symmetry_coefficient(const TopTree& t) { return t.symmetry(); }

namespace detail {

inline void check_brute_force_size(const LabeledTree& t) {
  if (t.size() > brute_force_vertex_limit) {
    throw invalid_argument("brute-force automorphism count limited to " +
                           std::to_string(brute_force_vertex_limit) + " vertices, tree has " +
                           std::to_string(t.size()));
  }
}

// Counts vertex permutations preserving colors, weights and adjacency,
// optionally fixing the root. Plain backtracking over assignments.
inline std::uint64_t count_automorphisms(const LabeledTree& t, bool fix_root) {
  check_brute_force_size(t);
  const std::size_t n = t.size();
  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : t.adjacency[v]) adjacent[v][w] = true;
  }
  std::vector<std::size_t> image(n, n);
  std::vector<bool> used(n, false);
  std::uint64_t count = 0;
  auto assign = [&](auto&& self, std::size_t v) -> void {
    if (v == n) {
      ++count;
      return;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (used[u] || t.colors[u] != t.colors[v] || t.weights[u] != t.weights[v]) continue;
      if (fix_root && ((v == t.root) != (u == t.root))) continue;
      bool ok = true;
      for (std::size_t w = 0; w < v && ok; ++w) {
        ok = adjacent[v][w] == adjacent[u][image[w]];
      }
      if (!ok) continue;
      used[u] = true;
      image[v] = u;
      self(self, v + 1);
      used[u] = false;
    }
  };
  assign(assign, 0);
  return count;
}

}  // namespace detail

/// Brute-force count of root-fixing automorphisms (oracle for σ).
inline std::uint64_t automorphism_count(const RootedTree& t) {
  return detail::count_automorphisms(to_labeled(t), /*fix_root=*/true);
}

/// Brute-force count of automorphisms of the underlying unrooted tree.
inline std::uint64_t unrooted_automorphism_count(const RootedTree& t) {
  return detail::count_automorphisms(to_labeled(t), /*fix_root=*/false);
}

/// Which (color, weight) pairs an enumeration may use. Bit w-1 of a mask
/// allows weight w.
struct WeightFilter {
  std::uint64_t white = ~std::uint64_t{0};
  std::uint64_t black = ~std::uint64_t{0};

  bool allows(Color c, unsigned w) const noexcept {
    if (w == 0 || w > 64) return false;
    const std::uint64_t mask = c == Color::white ? white : black;
    return (mask >> (w - 1)) & 1u;
  }

  friend auto operator<=>(const WeightFilter&, const WeightFilter&) = default;
};

namespace detail {

inline void check_cap(unsigned max_total_weight, unsigned cap) {
  if (max_total_weight > cap) {
    throw invalid_argument("tree weight " + std::to_string(max_total_weight) +
                           " exceeds the configured cap " + std::to_string(cap));
  }
}

inline bool weight_then_encoding(const RootedTree& a, const RootedTree& b) {
  return std::tuple(a.total_weight(), std::string_view(a.encoding())) <
         std::tuple(b.total_weight(), std::string_view(b.encoding()));
}

// Rooted trees of exact total weight and root color, built from a root
// weight plus a multiset of opposite-colored subtrees.
class RootedEnumerator {
 public:
  explicit RootedEnumerator(WeightFilter filter) : filter_(filter) {}

  const std::vector<RootedTree>& exact(unsigned total, Color root) {
    const auto key = std::pair(total, root);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<RootedTree> out;
    for (unsigned w = 1; w <= total; ++w) {
      if (!filter_.allows(root, w)) continue;
      const unsigned rest = total - w;
      if (rest == 0) {
        out.push_back(RootedTree::leaf(root, w));
        continue;
      }
      std::vector<RootedTree> pool;
      for (unsigned r = 1; r <= rest; ++r) {
        const auto& layer = exact(r, opposite(root));
        pool.insert(pool.end(), layer.begin(), layer.end());
      }
      std::vector<RootedTree> chosen;
      auto pick = [&](auto&& self, std::size_t from, unsigned remaining) -> void {
        if (remaining == 0) {
          out.push_back(RootedTree::graft(chosen, root, w));
          return;
        }
        for (std::size_t i = from; i < pool.size(); ++i) {
          if (pool[i].total_weight() > remaining) continue;
          chosen.push_back(pool[i]);
          self(self, i, remaining - pool[i].total_weight());
          chosen.pop_back();
        }
      };
      pick(pick, 0, rest);
    }
    std::sort(out.begin(), out.end(), weight_then_encoding);
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  WeightFilter filter_;
  std::map<std::pair<unsigned, Color>, std::vector<RootedTree>> memo_;
};

}  // namespace detail

/// All rooted classes with ‖t‖ <= max_total_weight, ordered by total weight
/// then encoding.
inline std::vector<RootedTree> enumerate_rooted(unsigned max_total_weight,
                                                std::optional<Color> root_color = std::nullopt,
                                                unsigned cap = default_tree_weight_cap,
                                                WeightFilter filter = {}) {
  detail::check_cap(max_total_weight, cap);
  detail::RootedEnumerator gen(filter);
  std::vector<RootedTree> out;
  for (unsigned w = 1; w <= max_total_weight; ++w) {
    for (Color c : {Color::white, Color::black}) {
      if (root_color && *root_color != c) continue;
      const auto& layer = gen.exact(w, c);
      out.insert(out.end(), layer.begin(), layer.end());
    }
  }
  std::sort(out.begin(), out.end(), detail::weight_then_encoding);
  return out;
}

/// All unrooted classes with ‖t‖ <= max_total_weight, same ordering.
inline std::vector<TopTree> enumerate_unrooted(unsigned max_total_weight,
                                               unsigned cap = default_tree_weight_cap,
                                               WeightFilter filter = {}) {
  detail::check_cap(max_total_weight, cap);
  // Process-wide cache; compositions re-enumerate the same sets constantly.
  static std::mutex mutex;
  static std::map<std::pair<unsigned, WeightFilter>, std::vector<TopTree>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({max_total_weight, filter}); it != cache.end()) return it->second;
  }

  std::set<std::string> seen;
  std::vector<TopTree> out;
  for (const auto& t : enumerate_rooted(max_total_weight, std::nullopt, cap, filter)) {
    if (seen.count(t.encoding()) != 0) continue;
    auto classes = rerootings(t);
    for (const auto& [r, _] : classes) seen.insert(r.encoding());
    const auto& [canonical, orbit] = classes.front();
    out.emplace_back(canonical, symmetry_coefficient(canonical) * orbit);
  }
  std::sort(out.begin(), out.end(), [](const TopTree& a, const TopTree& b) {
    return detail::weight_then_encoding(a.canonical(), b.canonical());
  });

  std::lock_guard lock(mutex);
  return cache.try_emplace({max_total_weight, filter}, std::move(out)).first->second;
}

}  // namespace cotlag
