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

// Seeded random graded series for property checks.

#pragma once

#include <cstddef>
#include <random>

#include "cotlag/symbols.hpp"

namespace cotlag {

struct RandomSeriesOptions {
  int max_order = 3;
  std::size_t terms_per_order = 3;
  unsigned max_x_degree = 2;
  int max_numerator = 3;
  int max_denominator = 3;
  double order_density = 1.0;  // probability that an order is populated
};

inline Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(1, max_num), den(1, max_den), sign(0, 1);
  Rational q(num(rng) * (sign(rng) ? 1 : -1), den(rng));
  q.canonicalize();
  return q;
}

/// A random monomial with joint p-degree `p_deg` and x-degree at most
/// `max_x`.
inline Exponents random_monomial(const Shape& s, unsigned p_deg, unsigned max_x,
                                 std::mt19937_64& rng) {
  Exponents e(s.var_count(), 0);
  if (s.p_count() > 0) {
    std::uniform_int_distribution<std::size_t> pv(0, s.p_count() - 1);
    for (unsigned k = 0; k < p_deg; ++k) ++e[pv(rng)];
  }
  std::uniform_int_distribution<unsigned> xd(0, max_x);
  std::uniform_int_distribution<std::size_t> xv(0, s.dim - 1);
  for (unsigned k = xd(rng); k > 0; --k) ++e[s.x_index(xv(rng))];
  return e;
}

/// A graded series: order i holds monomials of p-degree i+1.
inline FormalSeries random_series(const Shape& s, std::mt19937_64& rng,
                                  const RandomSeriesOptions& opt = {}) {
  FormalSeries f(s, true);
  if (s.blocks == 0) return f;
  std::bernoulli_distribution populated(opt.order_density);
  for (int i = 1; i <= opt.max_order; ++i) {
    if (!populated(rng)) continue;
    PolySymbol poly(s);
    for (std::size_t k = 0; k < opt.terms_per_order; ++k) {
      poly.add_term(random_monomial(s, static_cast<unsigned>(i) + 1, opt.max_x_degree, rng),
                    random_rational(rng, opt.max_numerator, opt.max_denominator));
    }
    f.set_order(i, std::move(poly));
  }
  return f;
}

/// A random series with only odd p-degree monomials, i.e. only even orders.
inline FormalSeries random_odd_series(const Shape& s, std::mt19937_64& rng,
                                      const RandomSeriesOptions& opt = {}) {
  FormalSeries f = random_series(s, rng, opt);
  FormalSeries odd(s, true);
  for (const auto& [i, poly] : f.orders()) {
    if (i % 2 == 0) odd.set_order(i, poly);
  }
  return odd;
}

}  // namespace cotlag
