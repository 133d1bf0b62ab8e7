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

// Exact sparse polynomials in block covector variables p[b][i] and base
// variables x[i], and ε-graded formal series of them.
//
// Variable layout for a Shape {dim d, blocks n}: p[0][0..d), p[1][0..d),
// ..., p[n-1][0..d), then x[0..d). Indices are 0-based in the C++ API and
// 1-based in text and JSON.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cotlag/error.hpp"

namespace cotlag {

using Rational = mpq_class;

struct Shape {
  std::size_t dim = 1;
  std::size_t blocks = 0;

  constexpr std::size_t p_count() const noexcept { return dim * blocks; }
  constexpr std::size_t var_count() const noexcept { return dim * (blocks + 1); }
  constexpr std::size_t p_index(std::size_t block, std::size_t comp) const noexcept {
    return block * dim + comp;
  }
  constexpr std::size_t x_index(std::size_t comp) const noexcept { return blocks * dim + comp; }
  constexpr bool is_p(std::size_t var) const noexcept { return var < p_count(); }

  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return "(dim " + std::to_string(s.dim) + ", blocks " + std::to_string(s.blocks) + ")";
}

using Exponents = std::vector<std::uint8_t>;

/// Graded order: lower total degree first; within a degree, earlier
/// variables with higher exponents first (p before x, blocks ascending).
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const noexcept {
    const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

inline unsigned p_degree(const Shape& s, const Exponents& e) {
  return std::accumulate(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(s.p_count()), 0u);
}

inline unsigned x_degree(const Shape& s, const Exponents& e) {
  return std::accumulate(e.begin() + static_cast<std::ptrdiff_t>(s.p_count()), e.end(), 0u);
}

/// Human readable monomial, e.g. `p[1][2]^2*x[1]` (1-based).
inline std::string format_monomial(const Shape& s, const Exponents& e) {
  std::string out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += '*';
    if (s.is_p(v)) {
      out += "p[" + std::to_string(v / s.dim + 1) + "][" + std::to_string(v % s.dim + 1) + "]";
    } else {
      out += "x[" + std::to_string(v - s.p_count() + 1) + "]";
    }
    if (e[v] > 1) out += "^" + std::to_string(e[v]);
  }
  return out.empty() ? "1" : out;
}

class PolySymbol {
 public:
  using Terms = std::map<Exponents, Rational, GrlexLess>;

  PolySymbol() = default;
  explicit PolySymbol(Shape shape) : shape_(shape) {}

  static PolySymbol constant(Shape shape, const Rational& c) {
    PolySymbol f(shape);
    f.add_term(Exponents(shape.var_count(), 0), c);
    return f;
  }
  static PolySymbol variable(Shape shape, std::size_t var, const Rational& c = 1) {
    if (var >= shape.var_count()) throw shape_error("variable index out of range");
    Exponents e(shape.var_count(), 0);
    e[var] = 1;
    PolySymbol f(shape);
    f.add_term(e, c);
    return f;
  }
  static PolySymbol p(Shape shape, std::size_t block, std::size_t comp) {
    if (block >= shape.blocks || comp >= shape.dim) throw shape_error("p index out of range");
    return variable(shape, shape.p_index(block, comp));
  }
  static PolySymbol x(Shape shape, std::size_t comp) {
    if (comp >= shape.dim) throw shape_error("x index out of range");
    return variable(shape, shape.x_index(comp));
  }
  static PolySymbol monomial(Shape shape, Exponents e, const Rational& c) {
    if (e.size() != shape.var_count()) throw shape_error("exponent vector has wrong length");
    PolySymbol f(shape);
    f.add_term(e, c);
    return f;
  }

  const Shape& shape() const noexcept { return shape_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Adds c·x^e, dropping the term if it cancels.
  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  unsigned total_degree() const {
    return terms_.empty() ? 0 : std::accumulate(terms_.rbegin()->first.begin(),
                                                terms_.rbegin()->first.end(), 0u);
  }
  unsigned max_x_degree() const {
    unsigned d = 0;
    for (const auto& [e, _] : terms_) d = std::max(d, x_degree(shape_, e));
    return d;
  }

  PolySymbol& operator+=(const PolySymbol& o) {
    require_same_shape(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  PolySymbol& operator-=(const PolySymbol& o) {
    require_same_shape(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  PolySymbol& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [_, c] : terms_) c *= s;
    }
    return *this;
  }
  PolySymbol& operator*=(const PolySymbol& o) { return *this = *this * o; }

  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator-(PolySymbol a) { return a *= Rational(-1); }
  friend PolySymbol operator*(PolySymbol a, const Rational& s) { return a *= s; }
  friend PolySymbol operator*(const Rational& s, PolySymbol a) { return a *= s; }

  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
    a.require_same_shape(b);
    PolySymbol out(a.shape_);
    Exponents e(a.shape_.var_count());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t v = 0; v < e.size(); ++v) {
          const unsigned s = unsigned{ea[v]} + eb[v];
          if (s > std::numeric_limits<std::uint8_t>::max()) {
            throw invalid_argument("exponent overflow in polynomial product");
          }
          e[v] = static_cast<std::uint8_t>(s);
        }
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const PolySymbol& a, const PolySymbol& b) {
    return a.shape_ == b.shape_ && a.terms_ == b.terms_;
  }

  /// ∂f/∂(var)
  PolySymbol derivative(std::size_t var) const {
    if (var >= shape_.var_count()) throw shape_error("derivative variable out of range");
    PolySymbol out(shape_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      --d[var];
      out.terms_.emplace(std::move(d), c * e[var]);
    }
    return out;
  }

  void require_same_shape(const PolySymbol& o) const {
    if (shape_ != o.shape_) {
      throw shape_error("polynomial shape mismatch: " + to_string(shape_) + " vs " +
                        to_string(o.shape_));
    }
  }

 private:
  Shape shape_{};
  Terms terms_;
};

inline PolySymbol add(const PolySymbol& a, const PolySymbol& b) { return a + b; }
inline PolySymbol scale(const Rational& s, const PolySymbol& a) { return s * a; }
inline PolySymbol multiply(const PolySymbol& a, const PolySymbol& b) { return a * b; }

/// Human readable polynomial in canonical term order.
inline std::string to_string(const PolySymbol& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    std::string coeff = c.get_str();
    if (!out.empty()) {
      if (coeff.front() == '-') {
        out += " - ";
        coeff.erase(0, 1);
      } else {
        out += " + ";
      }
    }
    const bool unit = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    if (unit) {
      out += coeff;
    } else {
      if (coeff != "1") out += (coeff == "-1" ? std::string("-") : coeff + "*");
      out += format_monomial(f.shape(), e);
    }
  }
  return out;
}

inline std::vector<std::size_t> p_variables(const Shape& s, std::size_t first_block,
                                            std::size_t block_count = 1) {
  if (first_block + block_count > s.blocks) throw invalid_argument("block out of range");
  std::vector<std::size_t> vars;
  for (std::size_t b = first_block; b < first_block + block_count; ++b) {
    for (std::size_t i = 0; i < s.dim; ++i) vars.push_back(s.p_index(b, i));
  }
  return vars;
}

inline std::vector<std::size_t> x_variables(const Shape& s) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < s.dim; ++i) vars.push_back(s.x_index(i));
  return vars;
}

inline std::vector<PolySymbol> gradient(const PolySymbol& f, std::span<const std::size_t> vars) {
  std::vector<PolySymbol> g;
  g.reserve(vars.size());
  for (std::size_t v : vars) g.push_back(f.derivative(v));
  return g;
}

/// ∇ of f with respect to p-block `block` (0-based).
inline std::vector<PolySymbol> grad_p(const PolySymbol& f, std::size_t block) {
  if (block >= f.shape().blocks) {
    throw invalid_argument("grad_p: block " + std::to_string(block + 1) + " out of range");
  }
  return gradient(f, p_variables(f.shape(), block));
}

inline std::vector<PolySymbol> grad_x(const PolySymbol& f) {
  return gradient(f, x_variables(f.shape()));
}

/// Σ_{a_1..a_m} ∂^m f/∂v_{a_1}…∂v_{a_m} · u_1[a_1] ⋯ u_m[a_m], the m-th
/// derivative of f along `vars` contracted with m direction vectors. Only
/// f is differentiated; directions may share variables with f.
inline PolySymbol directional_contract(const PolySymbol& f,
                                       std::span<const std::vector<PolySymbol>> directions,
                                       std::span<const std::size_t> vars) {
  for (const auto& u : directions) {
    if (u.size() != vars.size()) {
      throw invalid_argument("directional_contract: direction has length " +
                             std::to_string(u.size()) + ", expected " +
                             std::to_string(vars.size()));
    }
    for (const auto& c : u) f.require_same_shape(c);
  }
  if (directions.empty()) return f;
  PolySymbol out(f.shape());
  const auto& u = directions.front();
  for (std::size_t a = 0; a < vars.size(); ++a) {
    if (u[a].is_zero()) continue;
    PolySymbol df = f.derivative(vars[a]);
    if (df.is_zero()) continue;
    out += u[a] * directional_contract(df, directions.subspan(1), vars);
  }
  return out;
}

/// Image of one source variable under a linear substitution, in the
/// target layout.
struct LinearForm {
  std::vector<std::pair<std::size_t, Rational>> terms;

  static LinearForm zero() { return {}; }
  static LinearForm var(std::size_t v, Rational c = 1) { return {{{v, std::move(c)}}}; }
};

/// f with every source variable v replaced by images[v] (a linear form in
/// the target variables).
inline PolySymbol substitute_linear(const PolySymbol& f, const Shape& target,
                                    std::span<const LinearForm> images) {
  const std::size_t n = f.shape().var_count();
  if (images.size() != n) throw shape_error("substitution needs one image per variable");
  for (const auto& form : images) {
    for (const auto& [v, _] : form.terms) {
      if (v >= target.var_count()) throw shape_error("substitution image out of range");
    }
  }

  // Single-variable images only move exponents; others need expansion.
  std::vector<std::vector<PolySymbol>> powers(n);
  auto power = [&](std::size_t v, unsigned k) -> const PolySymbol& {
    auto& cache = powers[v];
    if (cache.empty()) {
      cache.push_back(PolySymbol::constant(target, 1));
      PolySymbol lin(target);
      Exponents e(target.var_count(), 0);
      for (const auto& [w, c] : images[v].terms) {
        e[w] = 1;
        lin.add_term(e, c);
        e[w] = 0;
      }
      cache.push_back(std::move(lin));
    }
    while (cache.size() <= k) cache.push_back(cache.back() * cache[1]);
    return cache[k];
  };

  PolySymbol out(target);
  Exponents base(target.var_count());
  for (const auto& [e, c] : f.terms()) {
    std::fill(base.begin(), base.end(), 0);
    Rational coeff = c;
    bool vanished = false;
    std::vector<std::pair<std::size_t, unsigned>> expand;
    for (std::size_t v = 0; v < n && !vanished; ++v) {
      if (e[v] == 0) continue;
      const auto& form = images[v].terms;
      if (form.empty()) {
        vanished = true;
      } else if (form.size() == 1) {
        Rational factor;
        mpz_pow_ui(factor.get_num_mpz_t(), form[0].second.get_num_mpz_t(), e[v]);
        mpz_pow_ui(factor.get_den_mpz_t(), form[0].second.get_den_mpz_t(), e[v]);
        coeff *= factor;
        const unsigned s = unsigned{base[form[0].first]} + e[v];
        if (s > std::numeric_limits<std::uint8_t>::max()) {
          throw invalid_argument("exponent overflow in substitution");
        }
        base[form[0].first] = static_cast<std::uint8_t>(s);
      } else {
        expand.emplace_back(v, e[v]);
      }
    }
    if (vanished) continue;
    if (expand.empty()) {
      out.add_term(base, coeff);
      continue;
    }
    PolySymbol term = PolySymbol::monomial(target, base, coeff);
    for (const auto& [v, k] : expand) term = term * power(v, k);
    out += term;
  }
  return out;
}

/// Variable-to-variable relabelling into another layout.
inline PolySymbol rename(const PolySymbol& f, const Shape& target,
                         std::span<const std::size_t> image) {
  std::vector<LinearForm> forms;
  forms.reserve(image.size());
  for (std::size_t v : image) forms.push_back(LinearForm::var(v));
  return substitute_linear(f, target, forms);
}

inline Rational eval(const PolySymbol& f, std::span<const Rational> point) {
  if (point.size() != f.shape().var_count()) {
    throw shape_error("eval: point has " + std::to_string(point.size()) + " coordinates, expected " +
                      std::to_string(f.shape().var_count()));
  }
  Rational total = 0;
  Rational pw;
  for (const auto& [e, c] : f.terms()) {
    Rational term = c;
    for (std::size_t v = 0; v < e.size() && term != 0; ++v) {
      if (e[v] == 0) continue;
      mpz_pow_ui(pw.get_num_mpz_t(), point[v].get_num_mpz_t(), e[v]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[v].get_den_mpz_t(), e[v]);
      term *= pw;
    }
    total += term;
  }
  return total;
}

/// Best-effort conversion of an exact rational to a floating type.
template <class Real>
Real to_real(const Rational& q) {
  if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
    return static_cast<Real>(mpz_get_si(q.get_num_mpz_t())) /
           static_cast<Real>(mpz_get_si(q.get_den_mpz_t()));
  }
  return static_cast<Real>(q.get_d());
}

/// A polynomial with floating coefficients laid out for repeated
/// evaluation.
template <class Real>
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const PolySymbol& f) : vars_(f.shape().var_count()) {
    for (const auto& [e, c] : f.terms()) {
      Term t{to_real<Real>(c), {}};
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] != 0) t.factors.emplace_back(v, e[v]);
      }
      terms_.push_back(std::move(t));
    }
  }

  Real operator()(std::span<const Real> point) const {
    if (point.size() != vars_) throw shape_error("evaluation point has wrong size");
    Real total = 0;
    for (const auto& t : terms_) {
      Real term = t.coeff;
      for (const auto& [v, k] : t.factors) {
        for (unsigned j = 0; j < k; ++j) term *= point[v];
      }
      total += term;
    }
    return total;
  }

  bool empty() const noexcept { return terms_.empty(); }

 private:
  struct Term {
    Real coeff;
    std::vector<std::pair<std::size_t, unsigned>> factors;
  };
  std::size_t vars_ = 0;
  std::vector<Term> terms_;
};

/// Violation of the P_i^n condition found by check_grading.
struct GradingViolation {
  int order;
  Exponents monomial;
  unsigned p_degree;
};

struct GradingReport {
  std::vector<GradingViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// ε-graded family {F^{(i)}}_{i>=1} of symbols sharing one layout.
class FormalSeries {
 public:
  FormalSeries() = default;
  explicit FormalSeries(Shape shape, bool graded = true) : shape_(shape), graded_(graded) {}

  const Shape& shape() const noexcept { return shape_; }
  std::size_t arity() const noexcept { return shape_.blocks; }
  std::size_t dim() const noexcept { return shape_.dim; }
  bool graded() const noexcept { return graded_; }
  void set_graded(bool graded) noexcept { graded_ = graded; }

  /// Nonzero orders only.
  const std::map<int, PolySymbol>& orders() const noexcept { return orders_; }
  bool is_zero() const noexcept { return orders_.empty(); }
  int max_order() const noexcept { return orders_.empty() ? 0 : orders_.rbegin()->first; }

  PolySymbol order(int i) const {
    auto it = orders_.find(i);
    return it == orders_.end() ? PolySymbol(shape_) : it->second;
  }

  void set_order(int i, PolySymbol f) {
    check_order_index(i);
    if (f.shape() != shape_) {
      throw shape_error("series order " + std::to_string(i) + " has shape " +
                        to_string(f.shape()) + ", series has " + to_string(shape_));
    }
    if (f.is_zero()) {
      orders_.erase(i);
    } else {
      orders_[i] = std::move(f);
    }
  }

  void add_to_order(int i, const PolySymbol& f) {
    if (f.is_zero()) return;
    auto it = orders_.find(i);
    if (it == orders_.end()) {
      set_order(i, f);
    } else {
      it->second += f;
      if (it->second.is_zero()) orders_.erase(it);
    }
  }

  FormalSeries truncated(int max_order) const {
    FormalSeries out(shape_, graded_);
    for (const auto& [i, f] : orders_) {
      if (i <= max_order) out.orders_.emplace(i, f);
    }
    return out;
  }

  FormalSeries& operator+=(const FormalSeries& o) {
    require_same_shape(o);
    for (const auto& [i, f] : o.orders_) add_to_order(i, f);
    graded_ = graded_ && o.graded_;
    return *this;
  }
  FormalSeries& operator-=(const FormalSeries& o) {
    require_same_shape(o);
    for (const auto& [i, f] : o.orders_) add_to_order(i, -f);
    graded_ = graded_ && o.graded_;
    return *this;
  }
  FormalSeries& operator*=(const Rational& s) {
    if (s == 0) orders_.clear();
    for (auto& [_, f] : orders_) f *= s;
    return *this;
  }

  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator-(FormalSeries a) { return a *= Rational(-1); }
  friend FormalSeries operator*(const Rational& s, FormalSeries a) { return a *= s; }

  /// Value equality of the symbols; the graded flag is metadata.
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.shape_ == b.shape_ && a.orders_ == b.orders_;
  }

  void require_same_shape(const FormalSeries& o) const {
    if (shape_ != o.shape_) {
      throw shape_error("series shape mismatch: " + to_string(shape_) + " vs " +
                        to_string(o.shape_));
    }
  }

 private:
  static void check_order_index(int i) {
    if (i < 1) throw invalid_argument("series orders start at 1, got " + std::to_string(i));
  }

  Shape shape_{};
  bool graded_ = true;
  std::map<int, PolySymbol> orders_;
};

/// Checks that every monomial of order i has joint p-degree exactly i+1.
inline GradingReport check_grading(const FormalSeries& f) {
  GradingReport report;
  for (const auto& [i, poly] : f.orders()) {
    for (const auto& [e, _] : poly.terms()) {
      const unsigned deg = p_degree(f.shape(), e);
      if (deg != static_cast<unsigned>(i) + 1) report.violations.push_back({i, e, deg});
    }
  }
  return report;
}

/// Σ_{i<=N} ε^i F^{(i)}(point).
inline Rational series_eval(const FormalSeries& f, std::span<const Rational> point,
                            const Rational& eps, int truncation) {
  if (point.size() != f.shape().var_count()) {
    throw shape_error("series_eval: point has wrong number of coordinates");
  }
  Rational total = 0;
  for (const auto& [i, poly] : f.orders()) {
    if (i > truncation) break;
    Rational weight;
    mpz_pow_ui(weight.get_num_mpz_t(), eps.get_num_mpz_t(), static_cast<unsigned long>(i));
    mpz_pow_ui(weight.get_den_mpz_t(), eps.get_den_mpz_t(), static_cast<unsigned long>(i));
    total += weight * eval(poly, point);
  }
  return total;
}

/// Reinterprets an arity-n series over R^d as arity 1 over R^{dn}:
/// p[b][i] becomes p[0][b·d+i]; x[i] stays x[i] (x[d..dn) unused).
inline FormalSeries flatten_blocks(const FormalSeries& f) {
  const Shape src = f.shape();
  if (src.blocks == 0) throw invalid_argument("cannot flatten an arity-0 series");
  const Shape dst{src.dim * src.blocks, 1};
  std::vector<std::size_t> image(src.var_count());
  for (std::size_t b = 0; b < src.blocks; ++b) {
    for (std::size_t i = 0; i < src.dim; ++i) image[src.p_index(b, i)] = dst.p_index(0, b * src.dim + i);
  }
  for (std::size_t i = 0; i < src.dim; ++i) image[src.x_index(i)] = dst.x_index(i);
  FormalSeries out(dst, f.graded());
  for (const auto& [i, poly] : f.orders()) out.set_order(i, rename(poly, dst, image));
  return out;
}

/// Inverse of flatten_blocks.
inline FormalSeries unflatten_blocks(const FormalSeries& f, std::size_t dim, std::size_t blocks) {
  const Shape src = f.shape();
  const Shape dst{dim, blocks};
  if (src.blocks != 1 || src.dim != dim * blocks) {
    throw shape_error("unflatten_blocks: series is not a flattened arity-" +
                      std::to_string(blocks) + " series");
  }
  std::vector<LinearForm> images(src.var_count());
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < dim; ++i) images[src.p_index(0, b * dim + i)] = LinearForm::var(dst.p_index(b, i));
  }
  for (std::size_t i = 0; i < src.dim; ++i) {
    if (i < dim) images[src.x_index(i)] = LinearForm::var(dst.x_index(i));
  }
  FormalSeries out(dst, f.graded());
  for (const auto& [order, poly] : f.orders()) {
    for (const auto& [e, _] : poly.terms()) {
      for (std::size_t i = dim; i < src.dim; ++i) {
        if (e[src.x_index(i)] != 0) throw shape_error("unflatten_blocks: unused x variable present");
      }
    }
    out.set_order(order, substitute_linear(poly, dst, images));
  }
  return out;
}

/// Every monomial has odd total p-degree, i.e. F(-p, x) = -F(p, x).
inline bool is_odd_in_p(const FormalSeries& f) {
  for (const auto& [_, poly] : f.orders()) {
    for (const auto& [e, c] : poly.terms()) {
      if (p_degree(f.shape(), e) % 2 == 0) return false;
    }
  }
  return true;
}

}  // namespace cotlag
