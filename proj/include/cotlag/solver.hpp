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

// Order-by-order construction of products with a prescribed bivector, and
// the Baker–Campbell–Hausdorff product for linear bivectors.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotlag/complex.hpp"
#include "cotlag/error.hpp"
#include "cotlag/groupoid.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/poisson.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

/// ½ p_1·α(x)·p_2 as an arity-2 symbol.
inline PolySymbol first_order_product(const PoissonStructure& alpha) {
  const std::size_t d = alpha.dim();
  const Shape s{d, 2};
  std::vector<std::size_t> x_image(d);
  for (std::size_t i = 0; i < d; ++i) x_image[i] = s.x_index(i);
  PolySymbol out(s);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      if (alpha(k, l).is_zero()) continue;
      out += Rational(1, 2) * PolySymbol::p(s, 0, k) * PolySymbol::p(s, 1, l) *
             rename(alpha(k, l), s, x_image);
    }
  }
  return out;
}

namespace detail {

// Exact row reduction of [A | b]; returns a solution with free variables
// set to zero, or nothing if the system is inconsistent. Pivots are taken
// column by column, first nonzero row.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a,
                                                         std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational factor = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
      b[i] -= factor * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

// Per-component p-degrees and x exponents: d commutes with this grading.
inline Exponents block_key(const Shape& s, const Exponents& e) {
  Exponents key(2 * s.dim, 0);
  for (std::size_t i = 0; i < s.dim; ++i) {
    unsigned total = 0;
    for (std::size_t b = 0; b < s.blocks; ++b) total += e[s.p_index(b, i)];
    key[i] = static_cast<std::uint8_t>(total);
    key[s.dim + i] = e[s.x_index(i)];
  }
  return key;
}

// Arity-2 monomials with the given key and both p-blocks present.
inline std::vector<Exponents> unknowns_for(const Shape& s, const Exponents& key) {
  std::vector<Exponents> out;
  Exponents e(s.var_count(), 0);
  for (std::size_t i = 0; i < s.dim; ++i) e[s.x_index(i)] = key[s.dim + i];
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == s.dim) {
      unsigned first = 0, second = 0;
      for (std::size_t k = 0; k < s.dim; ++k) {
        first += e[s.p_index(0, k)];
        second += e[s.p_index(1, k)];
      }
      if (first == 0 || second == 0) return;
      out.push_back(e);
      return;
    }
    for (unsigned a = 0; a <= key[i]; ++a) {
      e[s.p_index(0, i)] = static_cast<std::uint8_t>(a);
      e[s.p_index(1, i)] = static_cast<std::uint8_t>(key[i] - a);
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

// S_n with dS_n = −H_n, S_n(p,0,x) = S_n(0,p,x) = S_n(p,−p,x) = 0.
inline PolySymbol solve_order(const PolySymbol& h, int n) {
  const std::size_t d = h.shape().dim;
  const Shape s2{d, 2};
  std::map<Exponents, std::vector<std::pair<Exponents, Rational>>> groups;
  for (const auto& [e, c] : h.terms()) groups[block_key(h.shape(), e)].emplace_back(e, c);

  PolySymbol result(s2);
  for (const auto& [key, rhs_terms] : groups) {
    const auto unknowns = unknowns_for(s2, key);
    std::vector<PolySymbol> images;
    std::map<Exponents, std::size_t, GrlexLess> row_of;
    for (const auto& [e, c] : rhs_terms) row_of.emplace(e, 0);
    for (const auto& u : unknowns) {
      images.push_back(coboundary(PolySymbol::monomial(s2, u, 1)));
      for (const auto& [e, c] : images.back().terms()) row_of.emplace(e, 0);
    }
    std::size_t idx = 0;
    for (auto& [e, row] : row_of) row = idx++;

    const std::size_t rows = row_of.size() + 1;
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(unknowns.size(), Rational(0)));
    std::vector<Rational> b(rows, Rational(0));
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      for (const auto& [e, c] : images[j].terms()) a[row_of.at(e)][j] = c;
      unsigned second = 0;
      for (std::size_t k = 0; k < d; ++k) second += unknowns[j][s2.p_index(1, k)];
      a[rows - 1][j] = second % 2 == 0 ? 1 : -1;
    }
    for (const auto& [e, c] : rhs_terms) b[row_of.at(e)] = -c;

    auto x = solve_linear(std::move(a), std::move(b));
    if (!x) {
      throw verification_error("product equation has no solution at order " + std::to_string(n));
    }
    for (std::size_t j = 0; j < unknowns.size(); ++j) result.add_term(unknowns[j], (*x)[j]);
  }
  return result;
}

}  // namespace detail

/// S̃ with S̃^{(1)} = ½ p_1·α·p_2 solving the product equation to order N,
/// normalized by the SGS conditions; remaining freedom is fixed by setting
/// free variables of each linear system to zero.
inline FormalSeries solve_deformation(const PoissonStructure& alpha, int truncation,
                                      int cap = default_truncation_cap) {
  if (const auto r = validate_poisson(alpha); !r.ok()) {
    throw invalid_argument(r.antisymmetric ? "bivector fails the Jacobi identity"
                                           : "bivector is not antisymmetric");
  }
  if (truncation < 1) throw invalid_argument("order must be at least 1");
  if (truncation > cap) {
    throw invalid_argument("order " + std::to_string(truncation) + " exceeds the cap " +
                           std::to_string(cap));
  }
  const Shape s2{alpha.dim(), 2};
  const unsigned g = alpha.degree();
  FormalSeries s(s2, true);
  s.set_order(1, first_order_product(alpha));
  for (int n = 2; n <= truncation; ++n) {
    const Obstruction h = obstruction(s, n, cap);
    if (h.value.max_x_degree() > static_cast<unsigned>(n) * g + 1) {
      throw verification_error("obstruction at order " + std::to_string(n) +
                               " exceeds the expected x-degree");
    }
    PolySymbol sn = detail::solve_order(h.value, n);
    if (sn.max_x_degree() > static_cast<unsigned>(n) * g + 1) {
      throw verification_error("solution at order " + std::to_string(n) +
                               " exceeds the expected x-degree");
    }
    s.set_order(n, std::move(sn));
  }
  if (const auto r = verify_product(s, truncation, cap); !r.all_zero) {
    throw verification_error("solved series fails the product equation at order " +
                             std::to_string(r.first_failure()));
  }
  if (const auto r = check_sgs(s, truncation); !r.ok()) {
    throw verification_error("solved series fails " + to_string(r.failures.front().condition));
  }
  return s;
}

/// Structure constants c^{ij}_k of a Lie bracket [u, v]_k = c^{ij}_k u_i v_j.
class LieConstants {
 public:
  explicit LieConstants(std::size_t dim) : dim_(dim), c_(dim * dim * dim, Rational(0)) {
    if (dim == 0) throw invalid_argument("dimension must be positive");
  }

  std::size_t dim() const noexcept { return dim_; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c_.at((i * dim_ + j) * dim_ + k);
  }
  /// Sets c^{ij}_k = v and c^{ji}_k = −v (0-based).
  void set(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
    at(i, j, k) = v;
    at(j, i, k) = -v;
  }
  void set_entry(std::size_t i, std::size_t j, std::size_t k, const Rational& v) { at(i, j, k) = v; }

  /// α^{ij}(x) = c^{ij}_k x_k.
  PoissonStructure poisson() const {
    PoissonStructure a(dim_);
    const Shape xs{dim_, 0};
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        PolySymbol e(xs);
        for (std::size_t k = 0; k < dim_; ++k) {
          if ((*this)(i, j, k) != 0) e += (*this)(i, j, k) * PolySymbol::x(xs, k);
        }
        a.set_entry(i, j, e);
      }
    }
    return a;
  }

 private:
  Rational& at(std::size_t i, std::size_t j, std::size_t k) {
    if (i >= dim_ || j >= dim_ || k >= dim_) throw invalid_argument("structure constant index out of range");
    return c_[(i * dim_ + j) * dim_ + k];
  }

  std::size_t dim_;
  std::vector<Rational> c_;
};

inline void validate_lie(const LieConstants& c) {
  const std::size_t d = c.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        if (c(i, j, k) + c(j, i, k) != 0) {
          throw invalid_argument("structure constants are not antisymmetric");
        }
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          Rational sum = 0;
          for (std::size_t m = 0; m < d; ++m) {
            sum += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          }
          if (sum != 0) throw invalid_argument("structure constants fail the Jacobi identity");
        }
      }
    }
  }
}

/// Bernoulli numbers B_0..B_m with B_1 = −1/2.
inline std::vector<Rational> bernoulli_numbers(std::size_t m) {
  std::vector<Rational> b(m + 1, Rational(0));
  b[0] = 1;
  for (std::size_t n = 1; n <= m; ++n) {
    Rational sum = 0;
    mpz_class binom = 1;  // C(n+1, k)
    for (std::size_t k = 0; k < n; ++k) {
      sum += Rational(binom) * b[k];
      binom = binom * static_cast<unsigned long>(n + 1 - k) / static_cast<unsigned long>(k + 1);
    }
    b[n] = -sum / static_cast<unsigned long>(n + 1);
  }
  return b;
}

namespace detail {

using LieElement = std::vector<PolySymbol>;

inline LieElement lie_bracket(const LieConstants& c, const LieElement& u, const LieElement& v) {
  const std::size_t d = c.dim();
  LieElement out(d, PolySymbol(u.front().shape()));
  for (std::size_t i = 0; i < d; ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (v[j].is_zero()) continue;
      const PolySymbol uv = u[i] * v[j];
      for (std::size_t k = 0; k < d; ++k) {
        if (c(i, j, k) != 0) out[k] += c(i, j, k) * uv;
      }
    }
  }
  return out;
}

inline void add_scaled(LieElement& acc, const Rational& s, const LieElement& v) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += s * v[k];
}

// All compositions of n into `parts` positive parts.
inline void for_each_composition(int n, int parts, std::vector<int>& cur,
                                 const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 0) {
    if (n == 0) fn(cur);
    return;
  }
  for (int k = 1; k <= n - (parts - 1); ++k) {
    cur.push_back(k);
    for_each_composition(n - k, parts - 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace detail

/// S̃ with S_0^2 + S̃ = x·BCH(p_1, p_2), graded so that the p-degree n+1
/// part of the BCH series is order n. Uses the recursion
///
///   (n+1) Z_{n+1} = ½[X − Y, Z_n]
///     + Σ_{p>=1} B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n} [Z_{k_1}, […, [Z_{k_{2p}}, X + Y]…]]
///
/// with Z_1 = X + Y, X = p_1, Y = p_2.
inline FormalSeries bch_generating_function(const LieConstants& c, int truncation,
                                            int cap = default_truncation_cap) {
  validate_lie(c);
  if (truncation < 1) throw invalid_argument("order must be at least 1");
  if (truncation > cap) {
    throw invalid_argument("order " + std::to_string(truncation) + " exceeds the cap " +
                           std::to_string(cap));
  }
  const std::size_t d = c.dim();
  const Shape s2{d, 2};
  const int top = truncation + 1;
  const auto bern = bernoulli_numbers(static_cast<std::size_t>(top));

  detail::LieElement x_minus_y, x_plus_y;
  for (std::size_t i = 0; i < d; ++i) {
    const PolySymbol p1 = PolySymbol::p(s2, 0, i), p2 = PolySymbol::p(s2, 1, i);
    x_minus_y.push_back(p1 - p2);
    x_plus_y.push_back(p1 + p2);
  }
  std::vector<detail::LieElement> z(static_cast<std::size_t>(top) + 1);
  z[1] = x_plus_y;
  for (int n = 1; n < top; ++n) {
    detail::LieElement next = detail::lie_bracket(c, x_minus_y, z[n]);
    for (auto& comp : next) comp *= Rational(1, 2);
    Rational factorial = 1;
    for (int p2 = 2; p2 <= n; p2 += 2) {
      factorial *= (p2 - 1) * p2;
      const Rational coeff = bern[static_cast<std::size_t>(p2)] / factorial;
      if (coeff == 0) continue;
      std::vector<int> cur;
      detail::for_each_composition(n, p2, cur, [&](const std::vector<int>& k) {
        detail::LieElement term = x_plus_y;
        for (auto it = k.rbegin(); it != k.rend(); ++it) term = detail::lie_bracket(c, z[*it], term);
        detail::add_scaled(next, coeff, term);
      });
    }
    for (auto& comp : next) comp *= Rational(1, n + 1);
    z[n + 1] = std::move(next);
  }

  FormalSeries out(s2, true);
  for (int n = 2; n <= top; ++n) {
    PolySymbol f(s2);
    for (std::size_t k = 0; k < d; ++k) f += PolySymbol::x(s2, k) * z[n][k];
    out.set_order(n - 1, std::move(f));
  }
  return out;
}

}  // namespace cotlag
