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

// Command-line driver. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error, 3 numerical non-convergence.

#pragma once

#include <cstdint>
#include <iomanip>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotlag/complex.hpp"
#include "cotlag/error.hpp"
#include "cotlag/groupoid.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/oracle.hpp"
#include "cotlag/poisson.hpp"
#include "cotlag/random.hpp"
#include "cotlag/series_io.hpp"
#include "cotlag/solver.hpp"
#include "cotlag/trees.hpp"

namespace cotlag {

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_usage = 2, exit_convergence = 3 };

struct RunConfig {
  int order = 4;
  std::uint64_t seed = 1;
  unsigned max_tree_weight = default_tree_weight_cap;
  bool tree_cap_given = false;
  double tol = 1e-12;

  /// Truncation cap for compositions: the tree cap if given explicitly,
  /// otherwise the composition default.
  int truncation_cap() const {
    return tree_cap_given ? static_cast<int>(max_tree_weight) : default_truncation_cap;
  }
};

namespace cli_detail {

inline void emit_json(std::ostream& out, const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

inline FormalSeries load_series(const std::string& path) {
  return series_from_json(read_json_file(path));
}

inline std::vector<std::string> split_paths(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline long double read_real(const json& j) {
  if (j.is_number()) return j.get<long double>();
  if (j.is_string()) {
    const Rational q = parse_rational(j.get<std::string>());
    return to_real<long double>(q);
  }
  throw invalid_argument("point coordinates must be numbers or fraction strings");
}

inline long double parse_real(const std::string& text) {
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(text, &used);
  } catch (const std::exception&) {
    throw invalid_argument("not a number: " + text);
  }
  if (used != text.size()) throw invalid_argument("not a number: " + text);
  return v;
}

// {"p": [[block 1 values], …], "x": [values]} in the layout of `target`.
inline std::vector<long double> load_point(const std::string& path, const Shape& target) {
  const json j = read_json_file(path);
  const json& p = detail::array_field(j, "p");
  const json& x = detail::array_field(j, "x");
  if (p.size() != target.blocks || x.size() != target.dim) {
    throw invalid_argument("point must have " + std::to_string(target.blocks) +
                           " p-blocks and " + std::to_string(target.dim) + " x-values");
  }
  std::vector<long double> out(target.var_count());
  for (std::size_t b = 0; b < target.blocks; ++b) {
    if (!p[b].is_array() || p[b].size() != target.dim) {
      throw invalid_argument("each p-block must have " + std::to_string(target.dim) + " values");
    }
    for (std::size_t i = 0; i < target.dim; ++i) out[target.p_index(b, i)] = read_real(p[b][i]);
  }
  for (std::size_t i = 0; i < target.dim; ++i) out[target.x_index(i)] = read_real(x[i]);
  return out;
}

inline void print_report(std::ostream& out, const CochainReport& r) {
  if (r.all_zero) {
    out << "product equation holds exactly for orders " << r.first_order << ".." << r.last_order
        << '\n';
    return;
  }
  const auto& [order, residual] = *r.residuals.begin();
  out << "first nonzero residual at order " << order << ":\n";
  std::size_t shown = 0;
  for (const auto& [e, c] : residual.terms()) {
    out << "  " << format_rational(c) << " * " << format_monomial(residual.shape(), e) << '\n';
    if (++shown == 20) {
      out << "  ... (" << residual.term_count() - shown << " more terms)\n";
      break;
    }
  }
}

// Named property checks run by `selftest`.
struct Check {
  std::string name;
  std::function<bool()> run;
};

inline std::vector<Check> selftest_checks(const RunConfig& cfg) {
  auto rng = std::make_shared<std::mt19937_64>(cfg.seed);
  std::vector<Check> checks;

  checks.push_back({"symmetry coefficient equals brute-force automorphism count", [] {
                      for (const auto& t : enumerate_rooted(5)) {
                        if (symmetry_coefficient(t) != automorphism_count(t)) return false;
                      }
                      for (const auto& t : enumerate_unrooted(5)) {
                        if (t.symmetry() != unrooted_automorphism_count(t.canonical())) return false;
                      }
                      return true;
                    }});
  checks.push_back({"tree counts at total weight 2 and 3", [] {
                      const auto r2 = enumerate_rooted(2).size(), r3 = enumerate_rooted(3).size();
                      const auto u2 = enumerate_unrooted(2).size();
                      return r2 == 6 && r3 == 16 && u2 == 5;
                    }});
  checks.push_back({"coboundary squares to zero", [rng] {
                      for (int k = 0; k < 10; ++k) {
                        const Shape s{1 + k % 2, 1 + static_cast<std::size_t>(k % 3)};
                        const auto f = random_series(s, *rng);
                        if (!coboundary(coboundary(f)).is_zero()) return false;
                      }
                      return true;
                    }});
  checks.push_back({"bracket with the trivial product is the coboundary", [rng] {
                      for (int k = 0; k < 4; ++k) {
                        const Shape s{1, 1 + static_cast<std::size_t>(k % 2)};
                        const auto f = random_series(s, *rng, {.max_order = 2});
                        const FormalSeries zero2(Shape{1, 2}, true);
                        if (bracket(zero2, f, 3) != coboundary(f)) return false;
                      }
                      return true;
                    }});
  checks.push_back({"unit law F(I, ..., I) = F", [rng] {
                      const Shape s{1, 2};
                      const GenFunction f(random_series(s, *rng));
                      return compose(f, {identity(1), identity(1)}, 3) == f &&
                             compose(identity(1), {f}, 3) == f;
                    }});
  checks.push_back({"associativity of composition", [rng] {
                      const Shape s{1, 1};
                      const RandomSeriesOptions o{.max_order = 2, .terms_per_order = 2};
                      const GenFunction f(random_series(s, *rng, o)), g(random_series(s, *rng, o)),
                          h(random_series(s, *rng, o));
                      return compose(compose(f, {g}, 3), {h}, 3) == compose(f, {compose(g, {h}, 3)}, 3);
                    }});
  checks.push_back({"constant bivector gives an exact product", [] {
                      PoissonStructure a(2);
                      a.set(0, 1, PolySymbol::constant(a.shape(), 1));
                      FormalSeries s(Shape{2, 2}, true);
                      s.set_order(1, first_order_product(a));
                      return verify_product(s, 4).all_zero && check_sgs(s, 4).ok();
                    }});
  checks.push_back({"BCH product for so(3) is associative", [] {
                      LieConstants c(3);
                      c.set(0, 1, 2, 1);
                      c.set(1, 2, 0, 1);
                      c.set(2, 0, 1, 1);
                      const auto s = bch_generating_function(c, 3);
                      return verify_product(s, 3).all_zero && check_sgs(s, 3).ok();
                    }});
  checks.push_back({"solver reproduces a linear bivector", [] {
                      LieConstants c(3);
                      c.set(0, 1, 2, 1);
                      c.set(1, 2, 0, 1);
                      c.set(2, 0, 1, 1);
                      const auto s = solve_deformation(c.poisson(), 3);
                      return extract_poisson(s) == c.poisson();
                    }});
  checks.push_back({"morphism inversion", [rng] {
                      const Shape s{1, 1};
                      const auto f = random_series(s, *rng, {.max_order = 3, .terms_per_order = 2});
                      const auto g = invert_morphism(f, 3);
                      return compose(GenFunction(f), {GenFunction(g)}, 3).deformation().is_zero() &&
                             compose(GenFunction(g), {GenFunction(f)}, 3).deformation().is_zero();
                    }});
  checks.push_back({"oracle agrees with the tree expansion", [] {
                      const Shape s{1, 1};
                      FormalSeries f(s), g(s);
                      f.set_order(1, PolySymbol::p(s, 0, 0) * PolySymbol::p(s, 0, 0));
                      g.set_order(1, PolySymbol::p(s, 0, 0) * PolySymbol::p(s, 0, 0) *
                                         PolySymbol::x(s, 0) * PolySymbol::x(s, 0));
                      const GenFunction F(f), G(g);
                      const auto h = compose(F, {G}, 6);
                      const std::vector<long double> pt{0.5L, 0.5L};
                      OracleOptions<long double> opt;
                      opt.tol = 1e-18L;
                      const long double eps = 0.01L;
                      const long double numeric = numeric_phi<long double>(F, {G}, pt, eps, opt).value;
                      const long double formal =
                          0.25L + NumericSeries<long double>(h.deformation()).value(pt, eps);
                      return std::abs(numeric - formal) < 10 * std::pow(eps, 7.0L);
                    }});
  return checks;
}

}  // namespace cli_detail

/// Runs the command line `args` (without the program name).
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Formal cotangent Lagrangian operad toolkit", "cotlag"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--order", cfg.order, "Truncation order N")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed for property checks");
  auto* cap_opt = app.add_option("--max-tree-weight", cfg.max_tree_weight, "Tree weight cap")
                      ->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "Numerical tolerance")->check(CLI::PositiveNumber);

  std::function<int()> action;

  // trees enum
  auto* trees = app.add_subcommand("trees", "Weighted bipartite trees");
  trees->require_subcommand(1);
  auto* trees_enum = trees->add_subcommand("enum", "List tree classes");
  unsigned max_order = 0;
  bool rooted = false;
  std::string root_color;
  trees_enum->add_option("--max-order", max_order, "Maximal total weight")->required()
      ->check(CLI::PositiveNumber);
  trees_enum->add_flag("--rooted", rooted, "List rooted classes");
  trees_enum->add_option("--root-color", root_color, "Root color (w or b)")
      ->check(CLI::IsMember({"w", "b"}));
  trees_enum->callback([&] {
    action = [&] {
      if (!rooted && !root_color.empty()) {
        throw invalid_argument("--root-color requires --rooted");
      }
      if (rooted) {
        std::optional<Color> c;
        if (!root_color.empty()) c = root_color == "w" ? Color::white : Color::black;
        for (const auto& t : enumerate_rooted(max_order, c, cfg.max_tree_weight)) {
          out << t.encoding() << '\t' << symmetry_coefficient(t) << '\t' << t.vertex_count()
              << '\t' << t.total_weight() << '\n';
        }
      } else {
        for (const auto& t : enumerate_unrooted(max_order, cfg.max_tree_weight)) {
          out << t.encoding() << '\t' << t.symmetry() << '\t' << t.vertex_count() << '\t'
              << t.total_weight() << '\n';
        }
      }
      return int{exit_ok};
    };
  });

  std::string in_path, out_path, outer_path, inner_list, point_path, a_path, b_path,
      poisson_path, morphism_path, eps_text = "1e-2";

  auto load_inner = [&] {
    std::vector<GenFunction> inner;
    for (const auto& p : cli_detail::split_paths(inner_list)) {
      inner.emplace_back(cli_detail::load_series(p));
    }
    return inner;
  };

  auto* compose_cmd = app.add_subcommand("compose", "Compose generating functions");
  compose_cmd->add_option("--outer", outer_path, "Outer series")->required();
  compose_cmd->add_option("--inner", inner_list, "Comma-separated inner series")->required();
  compose_cmd->add_option("--out", out_path, "Output file (default stdout)");
  compose_cmd->callback([&] {
    action = [&] {
      const GenFunction outer(cli_detail::load_series(outer_path));
      const auto inner = load_inner();
      const auto h = compose(outer, inner, cfg.order, cfg.truncation_cap());
      cli_detail::emit_json(out, out_path, series_to_json(h.deformation()));
      return int{exit_ok};
    };
  });

  auto* numeric_cmd = app.add_subcommand("numeric-check", "Compare expansion and fixed point");
  numeric_cmd->add_option("--outer", outer_path, "Outer series")->required();
  numeric_cmd->add_option("--inner", inner_list, "Comma-separated inner series")->required();
  numeric_cmd->add_option("--point", point_path, "Point (p blocks, x) as JSON")->required();
  numeric_cmd->add_option("--eps", eps_text, "Deformation parameter");
  numeric_cmd->callback([&] {
    action = [&] {
      const GenFunction outer(cli_detail::load_series(outer_path));
      const auto inner = load_inner();
      const auto h = compose(outer, inner, cfg.order, cfg.truncation_cap());
      const auto pt = cli_detail::load_point(point_path, h.shape());
      const long double eps = cli_detail::parse_real(eps_text);
      OracleOptions<long double> opt;
      opt.tol = static_cast<long double>(cfg.tol);
      const auto phi = numeric_phi<long double>(outer, inner, pt, eps, opt);
      long double formal = NumericSeries<long double>(h.deformation()).value(pt, eps);
      for (std::size_t b = 0; b < h.shape().blocks; ++b) {
        for (std::size_t i = 0; i < h.dim(); ++i) {
          formal += pt[h.shape().p_index(b, i)] * pt[h.shape().x_index(i)];
        }
      }
      out << std::setprecision(21) << "numeric\t" << phi.value << "\nformal\t" << formal
          << "\ndiscrepancy\t" << std::abs(phi.value - formal) << "\niterations\t"
          << phi.iterations << '\n';
      return int{exit_ok};
    };
  });

  auto* cobound_cmd = app.add_subcommand("cobound", "Apply the coboundary");
  cobound_cmd->add_option("--in", in_path, "Input series")->required();
  cobound_cmd->add_option("--out", out_path, "Output file (default stdout)");
  cobound_cmd->callback([&] {
    action = [&] {
      cli_detail::emit_json(out, out_path, series_to_json(coboundary(cli_detail::load_series(in_path))));
      return int{exit_ok};
    };
  });

  auto* bracket_cmd = app.add_subcommand("bracket", "Bracket of two series");
  bracket_cmd->add_option("--a", a_path, "First series")->required();
  bracket_cmd->add_option("--b", b_path, "Second series")->required();
  bracket_cmd->add_option("--out", out_path, "Output file (default stdout)");
  bracket_cmd->callback([&] {
    action = [&] {
      const auto r = bracket(cli_detail::load_series(a_path), cli_detail::load_series(b_path),
                             cfg.order, cfg.truncation_cap());
      cli_detail::emit_json(out, out_path, series_to_json(r));
      return int{exit_ok};
    };
  });

  auto* verify_cmd = app.add_subcommand("verify-sga", "Check the product equation");
  verify_cmd->add_option("--in", in_path, "Arity-2 series")->required();
  verify_cmd->callback([&] {
    action = [&] {
      const auto r = verify_product(cli_detail::load_series(in_path), cfg.order, cfg.truncation_cap());
      cli_detail::print_report(out, r);
      return r.all_zero ? int{exit_ok} : int{exit_verification};
    };
  });

  auto* solve_cmd = app.add_subcommand("solve", "Build a product from a bivector");
  solve_cmd->add_option("--poisson", poisson_path, "Bivector JSON")->required();
  solve_cmd->add_option("--out", out_path, "Output file (default stdout)");
  solve_cmd->callback([&] {
    action = [&] {
      const auto alpha = poisson_from_json(read_json_file(poisson_path));
      const auto s = solve_deformation(alpha, cfg.order, cfg.truncation_cap());
      cli_detail::emit_json(out, out_path, series_to_json(s));
      return int{exit_ok};
    };
  });

  auto* validate_cmd = app.add_subcommand("validate", "Check antisymmetry and Jacobi");
  validate_cmd->add_option("--poisson", poisson_path, "Bivector JSON")->required();
  validate_cmd->callback([&] {
    action = [&] {
      const auto r = validate_poisson(poisson_from_json(read_json_file(poisson_path)));
      if (r.ok()) {
        out << "valid\n";
        return int{exit_ok};
      }
      if (r.failing_triple) {
        const auto& [i, j, k] = *r.failing_triple;
        out << "Jacobi identity fails at (" << i << "," << j << "," << k << ")\n";
      } else {
        out << "not antisymmetric at (" << (*r.asymmetric_pair)[0] << ","
            << (*r.asymmetric_pair)[1] << ")\n";
      }
      return int{exit_verification};
    };
  });

  auto* transform_cmd = app.add_subcommand("transform", "Transform a product by a morphism");
  transform_cmd->add_option("--in", in_path, "Arity-2 series")->required();
  transform_cmd->add_option("--morphism", morphism_path, "Arity-1 series")->required();
  transform_cmd->add_option("--out", out_path, "Output file (default stdout)");
  transform_cmd->callback([&] {
    action = [&] {
      const auto r = transform_product(cli_detail::load_series(in_path),
                                       cli_detail::load_series(morphism_path), cfg.order,
                                       cfg.truncation_cap());
      cli_detail::emit_json(out, out_path, series_to_json(r));
      return int{exit_ok};
    };
  });

  auto* invert_cmd = app.add_subcommand("invert", "Invert a morphism");
  invert_cmd->add_option("--in", in_path, "Arity-1 series")->required();
  invert_cmd->add_option("--out", out_path, "Output file (default stdout)");
  invert_cmd->callback([&] {
    action = [&] {
      const auto g = invert_morphism(cli_detail::load_series(in_path), cfg.order, cfg.truncation_cap());
      cli_detail::emit_json(out, out_path, series_to_json(g));
      return int{exit_ok};
    };
  });

  auto* poisson_cmd = app.add_subcommand("poisson", "Bivector induced by a product");
  poisson_cmd->add_option("--in", in_path, "Arity-2 series")->required();
  poisson_cmd->add_option("--out", out_path, "Output file (default stdout)");
  poisson_cmd->callback([&] {
    action = [&] {
      cli_detail::emit_json(out, out_path, poisson_to_json(extract_poisson(cli_detail::load_series(in_path))));
      return int{exit_ok};
    };
  });

  auto* maps_cmd = app.add_subcommand("maps", "Source and target maps");
  maps_cmd->add_option("--in", in_path, "Arity-2 series")->required();
  maps_cmd->add_option("--out", out_path, "Output file (default stdout)");
  maps_cmd->callback([&] {
    action = [&] {
      const auto s = cli_detail::load_series(in_path);
      const auto m = structure_maps(s, cfg.order);
      json j;
      j["dim"] = s.dim();
      j["source"] = json::array();
      j["target"] = json::array();
      for (const auto& f : m.source) j["source"].push_back(series_to_json(f));
      for (const auto& f : m.target) j["target"].push_back(series_to_json(f));
      cli_detail::emit_json(out, out_path, j);
      return int{exit_ok};
    };
  });

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
  selftest_cmd->callback([&] {
    action = [&] {
      bool all = true;
      for (const auto& c : cli_detail::selftest_checks(cfg)) {
        const bool ok = c.run();
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
      }
      return all ? int{exit_ok} : int{exit_verification};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  cfg.tree_cap_given = cap_opt->count() > 0;

  try {
    return action ? action() : int{exit_usage};
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_convergence;
  } catch (const verification_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_verification;
  } catch (const invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return exit_verification;
  }
}

}  // namespace cotlag
