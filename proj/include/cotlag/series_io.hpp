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

// JSON reading and writing of series and bivectors. Indices in files are
// 1-based; coefficients are exact fraction strings such as "-3/4".

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlag/error.hpp"
#include "cotlag/poisson.hpp"
#include "cotlag/symbols.hpp"

namespace cotlag {

using json = nlohmann::ordered_json;

inline Rational parse_rational(std::string_view text) {
  const auto bad = [&] { return invalid_argument("not an exact rational: \"" + std::string(text) + "\""); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  const auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s) {
      if (ch < '0' || ch > '9') return false;
    }
    return true;
  };
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  Rational q(mpz_class(n, 10), mpz_class(std::string(den), 10));
  if (q.get_den() == 0) throw invalid_argument("zero denominator in \"" + std::string(text) + "\"");
  q.canonicalize();
  return q;
}

inline std::string format_rational(Rational q) {
  q.canonicalize();
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

namespace detail {

inline Rational read_coeff(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(mpz_class(std::to_string(j.get<std::uint64_t>())))
                                  : Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
  }
  throw invalid_argument("coefficients must be integers or fraction strings, got " + j.dump());
}

inline std::size_t read_index(const json& j, std::size_t bound, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1 ||
      static_cast<std::size_t>(j.get<std::int64_t>()) > bound) {
    throw invalid_argument(std::string(what) + " index out of range: " + j.dump());
  }
  return static_cast<std::size_t>(j.get<std::int64_t>()) - 1;
}

inline std::uint8_t read_exponent(const json& j) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0 || j.get<std::int64_t>() > 255) {
    throw invalid_argument("exponent out of range: " + j.dump());
  }
  return static_cast<std::uint8_t>(j.get<std::int64_t>());
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw invalid_argument(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline const json& array_field(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) throw invalid_argument(std::string("field \"") + key + "\" must be an array");
  return a;
}

inline std::size_t read_size(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw invalid_argument(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

inline json write_terms(const PolySymbol& f) {
  const Shape& s = f.shape();
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) {
    json t;
    t["coeff"] = format_rational(c);
    json p = json::array(), x = json::array();
    for (std::size_t b = 0; b < s.blocks; ++b) {
      for (std::size_t i = 0; i < s.dim; ++i) {
        if (auto k = e[s.p_index(b, i)]) p.push_back(json::array({b + 1, i + 1, k}));
      }
    }
    for (std::size_t i = 0; i < s.dim; ++i) {
      if (auto k = e[s.x_index(i)]) x.push_back(json::array({i + 1, k}));
    }
    if (s.blocks > 0) t["p"] = std::move(p);
    t["x"] = std::move(x);
    terms.push_back(std::move(t));
  }
  return terms;
}

inline PolySymbol read_terms(const json& terms, const Shape& s) {
  if (!terms.is_array()) throw invalid_argument("\"terms\" must be an array");
  PolySymbol f(s);
  for (const auto& t : terms) {
    Exponents e(s.var_count(), 0);
    if (t.contains("p")) {
      for (const auto& v : t.at("p")) {
        if (!v.is_array() || v.size() != 3) throw invalid_argument("p entries are [block, comp, exp]");
        const auto b = read_index(v[0], s.blocks, "block");
        const auto i = read_index(v[1], s.dim, "component");
        e[s.p_index(b, i)] = read_exponent(v[2]);
      }
    }
    if (t.contains("x")) {
      for (const auto& v : t.at("x")) {
        if (!v.is_array() || v.size() != 2) throw invalid_argument("x entries are [comp, exp]");
        e[s.x_index(read_index(v[0], s.dim, "component"))] = read_exponent(v[1]);
      }
    }
    f.add_term(e, read_coeff(field(t, "coeff")));
  }
  return f;
}

}  // namespace detail

inline json series_to_json(const FormalSeries& f) {
  json j;
  j["arity"] = f.arity();
  j["dim"] = f.dim();
  j["graded"] = f.graded();
  json orders = json::array();
  for (const auto& [i, poly] : f.orders()) {
    json o;
    o["order"] = i;
    o["terms"] = detail::write_terms(poly);
    orders.push_back(std::move(o));
  }
  j["orders"] = std::move(orders);
  return j;
}

inline FormalSeries series_from_json(const json& j) {
  const Shape s{detail::read_size(j, "dim"), detail::read_size(j, "arity")};
  if (s.dim == 0) throw invalid_argument("dimension must be positive");
  bool graded = true;
  if (j.contains("graded")) {
    if (!j.at("graded").is_boolean()) throw invalid_argument("\"graded\" must be a boolean");
    graded = j.at("graded").get<bool>();
  }
  FormalSeries f(s, graded);
  for (const auto& o : detail::array_field(j, "orders")) {
    const json& order = detail::field(o, "order");
    if (!order.is_number_integer() || order.get<std::int64_t>() < 1) {
      throw invalid_argument("series orders start at 1, got " + order.dump());
    }
    f.add_to_order(static_cast<int>(order.get<std::int64_t>()),
                   detail::read_terms(detail::field(o, "terms"), s));
  }
  if (graded) {
    if (const auto r = check_grading(f); !r.ok()) {
      const auto& v = r.violations.front();
      throw invalid_argument("order " + std::to_string(v.order) + " term " +
                             format_monomial(s, v.monomial) + " has p-degree " +
                             std::to_string(v.p_degree) + ", expected " +
                             std::to_string(v.order + 1));
    }
  }
  return f;
}

inline json poisson_to_json(const PoissonStructure& a) {
  json j;
  j["dim"] = a.dim();
  json entries = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t k = i + 1; k < a.dim(); ++k) {
      if (a(i, k).is_zero()) continue;
      json e;
      e["i"] = i + 1;
      e["j"] = k + 1;
      e["terms"] = detail::write_terms(a(i, k));
      entries.push_back(std::move(e));
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

inline PoissonStructure poisson_from_json(const json& j) {
  const std::size_t d = detail::read_size(j, "dim");
  PoissonStructure a(d);
  for (const auto& e : detail::array_field(j, "entries")) {
    const auto i = detail::read_index(detail::field(e, "i"), d, "row");
    const auto k = detail::read_index(detail::field(e, "j"), d, "column");
    if (i >= k) throw invalid_argument("bivector entries must have i < j");
    a.set(i, k, a(i, k) + detail::read_terms(detail::field(e, "terms"), a.shape()));
  }
  return a;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw invalid_argument(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cotlag
