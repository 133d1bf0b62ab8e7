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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cotlag/random.hpp"
#include "cotlag/symbols.hpp"

using namespace cotlag;

namespace {

const Shape s11{1, 1};
const Shape s12{1, 2};
const Shape s21{2, 1};

PolySymbol p(const Shape& s, std::size_t b, std::size_t i) { return PolySymbol::p(s, b, i); }
PolySymbol x(const Shape& s, std::size_t i) { return PolySymbol::x(s, i); }

PolySymbol random_poly(const Shape& s, std::mt19937_64& rng, std::size_t terms = 4) {
  PolySymbol f(s);
  std::uniform_int_distribution<unsigned> deg(0, 3);
  for (std::size_t k = 0; k < terms; ++k) {
    f.add_term(random_monomial(s, deg(rng), 2, rng), random_rational(rng, 5, 4));
  }
  return f;
}

std::vector<Rational> random_point(const Shape& s, std::mt19937_64& rng) {
  std::vector<Rational> pt;
  for (std::size_t v = 0; v < s.var_count(); ++v) pt.push_back(random_rational(rng, 7, 5));
  return pt;
}

}  // namespace

TEST(Ring, Examples) {
  const auto a = p(s11, 0, 0) * x(s11, 0);
  EXPECT_TRUE((a + (-a)).is_zero());
  EXPECT_EQ(to_string(p(s12, 0, 0) * p(s12, 1, 0)), "p[1][1]*p[2][1]");
  const auto two_x2 = Rational(2) * x(s11, 0) * x(s11, 0);
  EXPECT_EQ(scale(Rational(1, 2), two_x2), x(s11, 0) * x(s11, 0));
  EXPECT_EQ(add(a, a), Rational(2) * a);
  EXPECT_EQ(multiply(a, a), a * a);
}

TEST(Ring, ShapeMismatch) {
  EXPECT_THROW(p(s11, 0, 0) + p(s12, 0, 0), shape_error);
  EXPECT_THROW(p(s11, 0, 0) * p(s12, 0, 0), shape_error);
}

TEST(Ring, NoStoredZeros) {
  PolySymbol f(s11);
  f.add_term(Exponents{1, 0}, 0);
  EXPECT_TRUE(f.is_zero());
  f.add_term(Exponents{1, 0}, 2);
  f.add_term(Exponents{1, 0}, -2);
  EXPECT_EQ(f.term_count(), 0u);
  EXPECT_EQ(Rational(0) * p(s11, 0, 0), PolySymbol(s11));
}

TEST(Ring, CanonicalOrder) {
  const auto f = x(s12, 0) + p(s12, 1, 0) + p(s12, 0, 0) + p(s12, 0, 0) * p(s12, 0, 0) +
                 PolySymbol::constant(s12, 3);
  EXPECT_EQ(to_string(f), "3 + p[1][1] + p[2][1] + x[1] + p[1][1]^2");
}

TEST(Ring, AxiomsOnRandomPolynomials) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const Shape s{1 + static_cast<std::size_t>(k % 2), static_cast<std::size_t>(k % 3)};
    const auto a = random_poly(s, rng), b = random_poly(s, rng), c = random_poly(s, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a - a, PolySymbol(s));
  }
}

TEST(Gradient, Examples) {
  const auto f = p(s11, 0, 0) * x(s11, 0);
  EXPECT_EQ(grad_p(f, 0), std::vector<PolySymbol>{x(s11, 0)});
  EXPECT_EQ(grad_x(f), std::vector<PolySymbol>{p(s11, 0, 0)});
  EXPECT_TRUE(grad_p(x(s11, 0) * x(s11, 0), 0)[0].is_zero());
  EXPECT_THROW(grad_p(f, 1), invalid_argument);
}

TEST(Gradient, FiniteDifferenceHalving) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Shape s{2, 1};
    PolySymbol f(s);
    for (int j = 0; j < 4; ++j) f.add_term(random_monomial(s, 2, 2, rng), random_rational(rng, 5, 3));
    const auto pt = random_point(s, rng);
    std::vector<Rational> dir;
    for (std::size_t v = 0; v < s.var_count(); ++v) dir.push_back(random_rational(rng, 3, 2));
    const auto grad = gradient(f, std::vector<std::size_t>{0, 1, 2, 3});
    Rational slope = 0;
    for (std::size_t v = 0; v < s.var_count(); ++v) slope += eval(grad[v], pt) * dir[v];
    auto err = [&](const Rational& h) {
      std::vector<Rational> moved = pt;
      for (std::size_t v = 0; v < moved.size(); ++v) moved[v] += h * dir[v];
      const Rational e = eval(f, moved) - eval(f, pt) - h * slope;
      return std::abs(e.get_d());
    };
    Rational h(1, 4096);
    double prev = err(h);
    if (prev == 0) continue;  // f is affine along dir
    for (int halving = 0; halving < 3; ++halving) {
      h /= 2;
      const double cur = err(h);
      EXPECT_NEAR(prev / cur, 4.0, 1.0);
      prev = cur;
    }
  }
}

TEST(DirectionalContract, Examples) {
  const auto f1 = x(s11, 0) * x(s11, 0);
  const std::vector<std::vector<PolySymbol>> one{{PolySymbol::constant(s11, 1)}};
  const std::vector<std::size_t> xv{s11.x_index(0)};
  EXPECT_EQ(directional_contract(f1, one, xv), Rational(2) * x(s11, 0));

  // f = p[1][1]^2 p[1][2], d = 2; directions are symbolic constants via extra blocks.
  const Shape s{2, 3};
  const auto f = p(s, 0, 0) * p(s, 0, 0) * p(s, 0, 1);
  const std::vector<PolySymbol> u{p(s, 1, 0), p(s, 1, 1)}, v{p(s, 2, 0), p(s, 2, 1)};
  const auto pv = p_variables(s, 0);
  const std::vector<std::vector<PolySymbol>> uv{u, v}, vu{v, u};
  const auto expected = Rational(2) * (u[0] * v[0] * p(s, 0, 1) + (u[0] * v[1] + u[1] * v[0]) * p(s, 0, 0));
  EXPECT_EQ(directional_contract(f, uv, pv), expected);
  EXPECT_EQ(directional_contract(f, vu, pv), expected);
}

TEST(DirectionalContract, LengthMismatch) {
  const std::vector<std::vector<PolySymbol>> bad{{PolySymbol(s21)}};
  const auto pv = p_variables(s21, 0);
  EXPECT_THROW(directional_contract(p(s21, 0, 0), bad, pv), invalid_argument);
}

TEST(DirectionalContract, MultilinearAndSymmetric) {
  std::mt19937_64 rng(3);
  const Shape s{2, 4};
  const auto pv = p_variables(s, 0);
  for (int k = 0; k < 10; ++k) {
    PolySymbol f(s);
    for (int j = 0; j < 4; ++j) {
      Exponents e(s.var_count(), 0);
      std::uniform_int_distribution<int> ex(0, 3);
      e[0] = static_cast<std::uint8_t>(ex(rng));
      e[1] = static_cast<std::uint8_t>(ex(rng));
      e[s.x_index(0)] = static_cast<std::uint8_t>(ex(rng) % 2);
      f.add_term(e, random_rational(rng, 4, 3));
    }
    auto dir = [&](std::size_t block) {
      return std::vector<PolySymbol>{random_rational(rng, 3, 2) * p(s, block, 0),
                                     random_rational(rng, 3, 2) * p(s, block, 1)};
    };
    const auto u = dir(1), v = dir(2), w = dir(3);
    const Rational a = random_rational(rng, 3, 2), b = random_rational(rng, 3, 2);
    std::vector<PolySymbol> combo;
    for (std::size_t i = 0; i < 2; ++i) combo.push_back(a * u[i] + b * w[i]);
    const std::vector<std::vector<PolySymbol>> lhs{combo, v}, d1{u, v}, d2{w, v}, sym{v, u};
    EXPECT_EQ(directional_contract(f, lhs, pv),
              a * directional_contract(f, d1, pv) + b * directional_contract(f, d2, pv));
    EXPECT_EQ(directional_contract(f, d1, pv), directional_contract(f, sym, pv));
  }
}

TEST(Eval, Examples) {
  const auto f = p(s11, 0, 0) * x(s11, 0);
  const std::vector<Rational> pt{2, 3};
  EXPECT_EQ(eval(f, pt), 6);
  EXPECT_THROW(eval(f, std::vector<Rational>{1}), shape_error);

  FormalSeries empty(s11, false);
  EXPECT_EQ(series_eval(empty, pt, Rational(1, 2), 5), 0);

  FormalSeries g(s11, false);
  g.set_order(1, x(s11, 0));
  g.set_order(2, x(s11, 0) * x(s11, 0));
  EXPECT_EQ(series_eval(g, std::vector<Rational>{0, 2}, Rational(1, 2), 2), 2);
  EXPECT_EQ(series_eval(g, std::vector<Rational>{0, 2}, Rational(1, 2), 1), 1);
}

TEST(Grading, Examples) {
  FormalSeries f(s12, true);
  f.set_order(1, p(s12, 0, 0) * p(s12, 1, 0) * x(s12, 0));
  EXPECT_TRUE(check_grading(f).ok());
  f.set_order(2, p(s12, 0, 0) * p(s12, 0, 0) * p(s12, 1, 0));
  EXPECT_TRUE(check_grading(f).ok());
  FormalSeries bad(s12, true);
  bad.set_order(1, p(s12, 0, 0));
  const auto r = check_grading(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().order, 1);
  EXPECT_EQ(r.violations.front().p_degree, 1u);
}

TEST(Series, OrdersStartAtOne) {
  FormalSeries f(s11);
  EXPECT_THROW(f.set_order(0, x(s11, 0)), invalid_argument);
  EXPECT_THROW(f.set_order(1, x(s12, 0)), shape_error);
}

TEST(Series, ArithmeticAndTruncation) {
  std::mt19937_64 rng(9);
  const auto a = random_series(s12, rng), b = random_series(s12, rng);
  EXPECT_EQ((a + b) - b, a);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(a.truncated(1).max_order(), a.order(1).is_zero() ? 0 : 1);
  EXPECT_EQ(Rational(2) * a, a + a);
}

TEST(Flatten, RoundTrip) {
  std::mt19937_64 rng(4);
  const Shape s{2, 3};
  const auto f = random_series(s, rng);
  const auto flat = flatten_blocks(f);
  EXPECT_EQ(flat.shape(), (Shape{6, 1}));
  EXPECT_EQ(unflatten_blocks(flat, 2, 3), f);
  EXPECT_THROW(unflatten_blocks(flat, 3, 3), shape_error);
}

TEST(Parity, OddInP) {
  FormalSeries f(s11);
  f.set_order(2, p(s11, 0, 0) * p(s11, 0, 0) * p(s11, 0, 0));
  EXPECT_TRUE(is_odd_in_p(f));
  f.set_order(1, p(s11, 0, 0) * p(s11, 0, 0));
  EXPECT_FALSE(is_odd_in_p(f));
}

TEST(Substitute, LinearForms) {
  // f(p1, x) = p1^2 x with p1 -> a + b, x -> 2x in the arity-2 layout.
  const auto f = p(s11, 0, 0) * p(s11, 0, 0) * x(s11, 0);
  std::vector<LinearForm> images(2);
  images[0].terms = {{s12.p_index(0, 0), 1}, {s12.p_index(1, 0), 1}};
  images[1] = LinearForm::var(s12.x_index(0), 2);
  const auto a = p(s12, 0, 0), b = p(s12, 1, 0);
  EXPECT_EQ(substitute_linear(f, s12, images), Rational(2) * (a + b) * (a + b) * x(s12, 0));
}

TEST(Compiled, MatchesExact) {
  std::mt19937_64 rng(12);
  const Shape s{2, 2};
  const auto f = random_poly(s, rng, 6);
  const auto pt = random_point(s, rng);
  std::vector<long double> real;
  for (const auto& q : pt) real.push_back(to_real<long double>(q));
  EXPECT_NEAR(static_cast<double>(CompiledPoly<long double>(f)(real)), eval(f, pt).get_d(), 1e-12);
}
