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

// Numerical fixed-point solution of the implicit composition equations.

#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cotlag/error.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

template <class Real = long double>
struct OracleOptions {
  Real tol = Real(1e-12);
  int max_iter = 200;
  Real max_eps = Real(0.1);
  Real damping = Real(1);
};

template <class Real = long double>
struct PhiResult {
  Real value;
  int iterations;
  Real residual;
};

/// S̃_ε = Σ ε^i S̃^{(i)} with value and gradients compiled for floating
/// evaluation.
template <class Real>
class NumericSeries {
 public:
  explicit NumericSeries(const FormalSeries& f) : shape_(f.shape()) {
    for (const auto& [i, poly] : f.orders()) {
      Order o{i, CompiledPoly<Real>(poly), {}};
      for (std::size_t v = 0; v < shape_.var_count(); ++v) {
        o.gradient.emplace_back(poly.derivative(v));
      }
      orders_.push_back(std::move(o));
    }
  }

  const Shape& shape() const noexcept { return shape_; }

  Real value(std::span<const Real> point, Real eps) const {
    Real total = 0;
    for (const auto& o : orders_) total += std::pow(eps, Real(o.index)) * o.value(point);
    return total;
  }

  Real partial(std::span<const Real> point, Real eps, std::size_t var) const {
    Real total = 0;
    for (const auto& o : orders_) {
      if (!o.gradient[var].empty()) total += std::pow(eps, Real(o.index)) * o.gradient[var](point);
    }
    return total;
  }

 private:
  struct Order {
    int index;
    CompiledPoly<Real> value;
    std::vector<CompiledPoly<Real>> gradient;
  };
  Shape shape_;
  std::vector<Order> orders_;
};

namespace detail {

template <class Real>
void require_finite(Real v, const char* what) {
  if (!std::isfinite(v)) throw convergence_error(std::string("non-finite value in ") + what);
}

template <class Real>
void check_oracle_eps(Real eps, const OracleOptions<Real>& opt) {
  if (!(std::abs(eps) <= opt.max_eps)) {
    throw invalid_argument("|eps| exceeds the oracle bound " + std::to_string(double(opt.max_eps)));
  }
  if (!(opt.tol > 0)) throw invalid_argument("tolerance must be positive");
  if (opt.max_iter < 1) throw invalid_argument("max_iter must be positive");
}

}  // namespace detail

/// Φ(p_G, x_F) for the composition F(G_1, …, G_n): solves
///
///   x_G[l] = x_F + ∇_{p_l} F̃_ε(p_F, x_F)
///   p_F[l] = p_{G_l}^Σ + ∇_x G̃_{l,ε}(p_{G_l}, x_G[l])
///
/// by fixed-point iteration from the base point and returns
/// G(p_G, x_G) + F(p_F, x_F) − x_G·p_F. `point` is laid out as the result
/// of compose: all p_G blocks, then x_F.
template <class Real = long double>
PhiResult<Real> numeric_phi(const GenFunction& outer, std::span<const GenFunction> inner,
                            std::span<const Real> point, Real eps,
                            const OracleOptions<Real>& opt = {}) {
  detail::check_oracle_eps(eps, opt);
  if (inner.size() != outer.arity()) throw invalid_argument("inner count does not match arity");
  const std::size_t d = outer.dim();
  const std::size_t n = outer.arity();
  std::vector<std::size_t> offset(n);
  std::size_t total = 0;
  for (std::size_t l = 0; l < n; ++l) {
    if (inner[l].dim() != d) throw shape_error("inner function dimension mismatch");
    offset[l] = total;
    total += inner[l].arity();
  }
  const Shape target{d, total};
  if (point.size() != target.var_count()) throw shape_error("oracle point has wrong size");
  for (Real v : point) detail::require_finite(v, "oracle point");

  const NumericSeries<Real> f(outer.deformation());
  std::vector<NumericSeries<Real>> g;
  for (const auto& gl : inner) g.emplace_back(gl.deformation());

  std::vector<Real> x_f(point.begin() + target.p_count(), point.end());
  // p_{G_l}^Σ
  std::vector<std::vector<Real>> p_sum(n, std::vector<Real>(d, 0));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < inner[l].arity(); ++c) {
      for (std::size_t i = 0; i < d; ++i) p_sum[l][i] += point[target.p_index(offset[l] + c, i)];
    }
  }

  // Argument vectors in each function's own layout.
  std::vector<Real> f_arg(outer.shape().var_count());
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < d; ++i) f_arg[outer.shape().p_index(l, i)] = p_sum[l][i];
  }
  for (std::size_t i = 0; i < d; ++i) f_arg[outer.shape().x_index(i)] = x_f[i];
  std::vector<std::vector<Real>> g_arg(n);
  for (std::size_t l = 0; l < n; ++l) {
    const Shape& s = inner[l].shape();
    g_arg[l].resize(s.var_count());
    for (std::size_t c = 0; c < s.blocks; ++c) {
      for (std::size_t i = 0; i < d; ++i) g_arg[l][s.p_index(c, i)] = point[target.p_index(offset[l] + c, i)];
    }
    for (std::size_t i = 0; i < d; ++i) g_arg[l][s.x_index(i)] = x_f[i];
  }

  const Real w = opt.damping;
  PhiResult<Real> result{0, 0, 0};
  bool converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Real change = 0;
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < d; ++i) {
        const Real next = x_f[i] + f.partial(f_arg, eps, outer.shape().p_index(l, i));
        detail::require_finite(next, "oracle iteration");
        Real& cur = g_arg[l][inner[l].shape().x_index(i)];
        const Real updated = cur + w * (next - cur);
        change = std::max(change, std::abs(updated - cur));
        cur = updated;
      }
    }
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < d; ++i) {
        const Real next = p_sum[l][i] + g[l].partial(g_arg[l], eps, inner[l].shape().x_index(i));
        detail::require_finite(next, "oracle iteration");
        Real& cur = f_arg[outer.shape().p_index(l, i)];
        const Real updated = cur + w * (next - cur);
        change = std::max(change, std::abs(updated - cur));
        cur = updated;
      }
    }
    result.iterations = it;
    result.residual = change;
    if (change <= opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw convergence_error("fixed-point iteration did not converge in " +
                            std::to_string(opt.max_iter) + " iterations (last change " +
                            std::to_string(double(result.residual)) + ")");
  }

  Real phi = f.value(f_arg, eps);
  for (std::size_t l = 0; l < n; ++l) {
    const Shape& s = inner[l].shape();
    phi += g[l].value(g_arg[l], eps);
    for (std::size_t i = 0; i < d; ++i) {
      const Real xg = g_arg[l][s.x_index(i)];
      const Real pf = f_arg[outer.shape().p_index(l, i)];
      phi += p_sum[l][i] * xg + pf * x_f[i] - xg * pf;
    }
  }
  detail::require_finite(phi, "oracle value");
  result.value = phi;
  return result;
}

template <class Real = long double>
PhiResult<Real> numeric_phi(const GenFunction& outer, std::initializer_list<GenFunction> inner,
                            std::span<const Real> point, Real eps,
                            const OracleOptions<Real>& opt = {}) {
  return numeric_phi<Real>(outer, std::span<const GenFunction>(inner.begin(), inner.size()), point,
                           eps, opt);
}

}  // namespace cotlag
