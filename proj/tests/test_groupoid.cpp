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

#include "cotlag/groupoid.hpp"
#include "cotlag/random.hpp"
#include "cotlag/solver.hpp"

using namespace cotlag;

namespace {

const Shape s22{2, 2};

PoissonStructure unit_constant() {
  PoissonStructure a(2);
  a.set(0, 1, PolySymbol::constant(a.shape(), 1));
  return a;
}

FormalSeries product_of(const PoissonStructure& a) {
  FormalSeries s(Shape{a.dim(), 2}, true);
  s.set_order(1, first_order_product(a));
  return s;
}

FormalSeries symmetric_first_order() {
  FormalSeries f(s22);
  const auto p = [](std::size_t b, std::size_t i) { return PolySymbol::p(s22, b, i); };
  f.set_order(1, p(0, 0) * p(1, 0) + p(0, 1) * p(1, 1));
  return f;
}

// Random odd morphism with a single nonzero order 2 on dimension d.
FormalSeries random_odd_morphism(std::size_t d, std::mt19937_64& rng) {
  FormalSeries f(Shape{d, 1}, true);
  while (f.is_zero()) {
    f = random_odd_series(Shape{d, 1}, rng, {.max_order = 2, .terms_per_order = 3, .max_x_degree = 1});
  }
  return f;
}

}  // namespace

TEST(Sgs, Examples) {
  EXPECT_TRUE(check_sgs(FormalSeries(s22, true), 4).ok());
  EXPECT_TRUE(check_sgs(product_of(unit_constant()), 4).ok());
  const auto r = check_sgs(symmetric_first_order(), 4);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].condition, SgsCondition::inverse);
  EXPECT_EQ(r.failures[0].order, 1);
}

TEST(Sgs, DetectsEachCondition) {
  FormalSeries f(s22);
  f.set_order(1, PolySymbol::p(s22, 0, 0) * PolySymbol::p(s22, 0, 1));
  const auto r = check_sgs(f, 1);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failures[0].condition, SgsCondition::left_zero);
}

TEST(Poisson, Extract) {
  EXPECT_EQ(extract_poisson(product_of(unit_constant())), unit_constant());
  EXPECT_TRUE(extract_poisson(FormalSeries(s22, true)).is_zero());
  EXPECT_THROW(extract_poisson(symmetric_first_order()), verification_error);
  LieConstants c(3);
  c.set(0, 1, 2, 1);
  EXPECT_EQ(extract_poisson(bch_generating_function(c, 3)), c.poisson());
}

TEST(Maps, Zero) {
  const auto m = structure_maps(FormalSeries(s22, true), 3);
  ASSERT_EQ(m.source.size(), 2u);
  for (const auto& f : m.source) EXPECT_TRUE(f.is_zero());
  for (const auto& f : m.target) EXPECT_TRUE(f.is_zero());
}

TEST(Maps, ConstantPoisson) {
  const auto m = structure_maps(product_of(unit_constant()), 3);
  const Shape s{2, 1};
  // source = x − ½αp, target = x + ½αp with α^{12} = 1.
  EXPECT_EQ(m.source[0].order(1), Rational(-1, 2) * PolySymbol::p(s, 0, 1));
  EXPECT_EQ(m.source[1].order(1), Rational(1, 2) * PolySymbol::p(s, 0, 0));
  EXPECT_EQ(m.target[0].order(1), Rational(1, 2) * PolySymbol::p(s, 0, 1));
  EXPECT_EQ(m.target[1].order(1), Rational(-1, 2) * PolySymbol::p(s, 0, 0));
  for (std::size_t i = 0; i < 2; ++i) {
    const auto diff = m.target[i].order(1) - m.source[i].order(1);
    PolySymbol alpha_p(s);
    for (std::size_t j = 0; j < 2; ++j) {
      alpha_p += Rational(unit_constant()(i, j).coefficient(Exponents{0, 0})) * PolySymbol::p(s, 0, j);
    }
    EXPECT_EQ(diff, alpha_p);
  }
}

TEST(Maps, FixBase) {
  LieConstants c(3);
  c.set(0, 1, 2, 1);
  c.set(1, 2, 0, 1);
  c.set(2, 0, 1, 1);
  const auto m = structure_maps(bch_generating_function(c, 4), 4);
  const std::vector<Rational> at_zero{0, 0, 0, 2, -1, 3};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(series_eval(m.source[i], at_zero, 1, 4), 0);
    EXPECT_EQ(series_eval(m.target[i], at_zero, 1, 4), 0);
  }
  EXPECT_EQ(StructureMaps::unit(std::vector<Rational>{1, 2, 3, 4}), (std::vector<Rational>{0, 0, 3, 4}));
  EXPECT_EQ(StructureMaps::inverse(std::vector<Rational>{1, 2, 3, 4}), (std::vector<Rational>{-1, -2, 3, 4}));
}

TEST(Maps, RequireSgs) { EXPECT_THROW(structure_maps(symmetric_first_order(), 2), verification_error); }

TEST(Invert, Examples) {
  const Shape s{1, 1};
  EXPECT_TRUE(invert_morphism(FormalSeries(s, true), 4).is_zero());
  FormalSeries f(s);
  f.set_order(1, PolySymbol::p(s, 0, 0) * PolySymbol::p(s, 0, 0) * PolySymbol::x(s, 0));
  EXPECT_EQ(invert_morphism(f, 3).order(1), -f.order(1));
}

TEST(Invert, BothSides) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 4; ++k) {
    const Shape s{1 + static_cast<std::size_t>(k % 2), 1};
    const auto f = random_series(s, rng, {.max_order = 4, .terms_per_order = 2, .max_x_degree = 2});
    const auto g = invert_morphism(f, 4);
    EXPECT_TRUE(compose(GenFunction(f), {GenFunction(g)}, 4).deformation().is_zero());
    EXPECT_TRUE(compose(GenFunction(g), {GenFunction(f)}, 4).deformation().is_zero());
  }
}

TEST(Invert, OddClosure) {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 4; ++k) {
    const auto f = random_odd_series(Shape{2, 1}, rng, {.max_order = 4, .terms_per_order = 2});
    const auto g = random_odd_series(Shape{2, 1}, rng, {.max_order = 4, .terms_per_order = 2});
    EXPECT_TRUE(is_odd_in_p(invert_morphism(f, 4)));
    EXPECT_TRUE(is_odd_in_p(compose(GenFunction(f), {GenFunction(g)}, 4).deformation()));
  }
}

TEST(Transform, ZeroMorphism) {
  const auto s = product_of(unit_constant());
  EXPECT_EQ(transform_product(s, FormalSeries(Shape{2, 1}, true), 4), s);
}

TEST(Transform, PreservesProductSgsAndPoisson) {
  std::mt19937_64 rng(53);
  const auto s = product_of(unit_constant());
  for (int k = 0; k < 2; ++k) {
    const auto f = random_odd_morphism(2, rng);
    const auto t = transform_product(s, f, 4);
    EXPECT_TRUE(verify_product(t, 4).all_zero);
    EXPECT_TRUE(check_sgs(t, 4).ok());
    EXPECT_EQ(extract_poisson(t), extract_poisson(s));
  }
}

TEST(Transform, NonOddStillAssociative) {
  std::mt19937_64 rng(54);
  const auto s = product_of(unit_constant());
  const auto f = random_series(Shape{2, 1}, rng, {.max_order = 1, .terms_per_order = 2, .max_x_degree = 1});
  EXPECT_TRUE(verify_product(transform_product(s, f, 3), 3).all_zero);
}

TEST(Psi, ZeroIsIdentity) {
  const std::vector<long double> p{0.3L, -0.2L}, x{1.0L, 2.0L};
  const auto r = psi_numeric<long double>(FormalSeries(Shape{2, 1}, true), p, x, 0.01L);
  EXPECT_EQ(r.p, p);
  EXPECT_EQ(r.x, x);
}

TEST(Psi, FixesZeroSection) {
  std::mt19937_64 rng(55);
  const auto f = random_series(Shape{2, 1}, rng, {.max_order = 2, .terms_per_order = 3});
  const std::vector<long double> p{0.0L, 0.0L}, x{0.7L, -1.1L};
  const auto r = psi_numeric<long double>(f, p, x, 0.01L);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(static_cast<double>(r.p[i]), 0.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(r.x[i]), static_cast<double>(x[i]), 1e-12);
  }
}

TEST(Psi, Symplectic) {
  std::mt19937_64 rng(56);
  const std::size_t d = 2;
  const auto f = random_series(Shape{d, 1}, rng, {.max_order = 2, .terms_per_order = 3});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const long double h = 1e-5L;
  for (int k = 0; k < 3; ++k) {
    std::vector<long double> z(2 * d);
    for (auto& v : z) v = u(rng);
    auto psi = [&](const std::vector<long double>& pt) {
      const auto r = psi_numeric<long double>(f, std::span(pt).first(d), std::span(pt).subspan(d), 0.01L);
      std::vector<long double> out(r.p);
      out.insert(out.end(), r.x.begin(), r.x.end());
      return out;
    };
    std::vector<std::vector<long double>> j(2 * d, std::vector<long double>(2 * d));
    for (std::size_t c = 0; c < 2 * d; ++c) {
      auto zp = z, zm = z;
      zp[c] += h;
      zm[c] -= h;
      const auto fp = psi(zp), fm = psi(zm);
      for (std::size_t r = 0; r < 2 * d; ++r) j[r][c] = (fp[r] - fm[r]) / (2 * h);
    }
    // Ω pairs p_i with x_i: Ω[i][d+i] = 1, Ω[d+i][i] = −1.
    auto omega = [&](std::size_t a, std::size_t b) -> long double {
      if (a < d && b == a + d) return 1;
      if (a >= d && b + d == a) return -1;
      return 0;
    };
    for (std::size_t a = 0; a < 2 * d; ++a) {
      for (std::size_t b = 0; b < 2 * d; ++b) {
        long double v = 0;
        for (std::size_t r = 0; r < 2 * d; ++r) {
          for (std::size_t s = 0; s < 2 * d; ++s) v += j[a][r] * omega(r, s) * j[b][s];
        }
        EXPECT_NEAR(static_cast<double>(v), static_cast<double>(omega(a, b)), 1e-6);
      }
    }
  }
}

TEST(Psi, CompositionOrder) {
  // ψ of the composed morphism F(G) equals ψ_F ∘ ψ_G.
  std::mt19937_64 rng(57);
  const Shape s{1, 1};
  const auto f = random_series(s, rng, {.max_order = 2, .terms_per_order = 2, .max_x_degree = 1});
  const auto g = random_series(s, rng, {.max_order = 2, .terms_per_order = 2, .max_x_degree = 1});
  const auto fg = compose(GenFunction(f), {GenFunction(g)}, 8).deformation();
  const long double eps = 0.01L;
  OracleOptions<long double> opt;
  opt.tol = 1e-18L;
  const std::vector<long double> p{0.4L}, x{-0.3L};
  const auto direct = psi_numeric<long double>(fg, p, x, eps, opt);
  const auto inner = psi_numeric<long double>(g, p, x, eps, opt);
  const auto outer = psi_numeric<long double>(f, inner.p, inner.x, eps, opt);
  EXPECT_NEAR(static_cast<double>(direct.p[0]), static_cast<double>(outer.p[0]), 1e-14);
  EXPECT_NEAR(static_cast<double>(direct.x[0]), static_cast<double>(outer.x[0]), 1e-14);
}
