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

// Polynomial bivector fields α^{ij}(x) and their validation.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cotlag/error.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

/// α^{ij}(x), stored as a full d×d matrix of symbols in x only.
class PoissonStructure {
 public:
  explicit PoissonStructure(std::size_t dim)
      : dim_(dim), entries_(dim * dim, PolySymbol(Shape{dim, 0})) {
    if (dim == 0) throw invalid_argument("dimension must be positive");
  }

  std::size_t dim() const noexcept { return dim_; }
  Shape shape() const noexcept { return Shape{dim_, 0}; }

  const PolySymbol& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * dim_ + j); }

  /// Sets α^{ij} = f and α^{ji} = −f (0-based).
  void set(std::size_t i, std::size_t j, const PolySymbol& f) {
    if (i == j) {
      if (!f.is_zero()) throw invalid_argument("diagonal bivector entries must vanish");
      return;
    }
    set_entry(i, j, f);
    set_entry(j, i, -f);
  }

  /// Sets one entry alone; antisymmetry is then up to the caller.
  void set_entry(std::size_t i, std::size_t j, const PolySymbol& f) {
    if (i >= dim_ || j >= dim_) throw invalid_argument("bivector index out of range");
    if (f.shape() != shape()) throw shape_error("bivector entries are functions of x only");
    entries_[i * dim_ + j] = f;
  }

  /// Maximal total degree over entries (0 for the zero bivector).
  unsigned degree() const {
    unsigned g = 0;
    for (const auto& e : entries_) g = std::max(g, e.total_degree());
    return g;
  }

  bool is_zero() const {
    for (const auto& e : entries_) {
      if (!e.is_zero()) return false;
    }
    return true;
  }

  friend bool operator==(const PoissonStructure& a, const PoissonStructure& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_;
  std::vector<PolySymbol> entries_;
};

struct PoissonReport {
  bool antisymmetric = true;
  bool jacobi = true;
  std::optional<std::array<std::size_t, 2>> asymmetric_pair;  // 1-based
  std::optional<std::array<std::size_t, 3>> failing_triple;   // 1-based

  bool ok() const noexcept { return antisymmetric && jacobi; }
};

/// Σ_m α^{im}∂_m α^{jk} + α^{jm}∂_m α^{ki} + α^{km}∂_m α^{ij}.
inline PolySymbol jacobiator(const PoissonStructure& a, std::size_t i, std::size_t j,
                             std::size_t k) {
  const Shape s = a.shape();
  PolySymbol out(s);
  for (std::size_t m = 0; m < a.dim(); ++m) {
    out += a(i, m) * a(j, k).derivative(s.x_index(m));
    out += a(j, m) * a(k, i).derivative(s.x_index(m));
    out += a(k, m) * a(i, j).derivative(s.x_index(m));
  }
  return out;
}

inline PoissonReport validate_poisson(const PoissonStructure& a) {
  PoissonReport r;
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d && r.antisymmetric; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      if (!(a(i, j) + a(j, i)).is_zero()) {
        r.antisymmetric = false;
        r.asymmetric_pair = {i + 1, j + 1};
        break;
      }
    }
  }
  for (std::size_t i = 0; i < d && r.jacobi; ++i) {
    for (std::size_t j = i + 1; j < d && r.jacobi; ++j) {
      for (std::size_t k = j + 1; k < d; ++k) {
        if (!jacobiator(a, i, j, k).is_zero()) {
          r.jacobi = false;
          r.failing_triple = {i + 1, j + 1, k + 1};
          break;
        }
      }
    }
  }
  return r;
}

}  // namespace cotlag
