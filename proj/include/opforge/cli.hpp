#pragma once

/** @file cli.hpp
 *  @brief The command-line surface. `run` takes its streams as arguments so
 *  the commands can be driven in-process.
 *
 *  Exit status: 0 on success, 2 on a malformed command line or malformed
 *  input, 1 when the input parses but fails validation (a JSON witness is
 *  written to the output stream).
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opforge/bv.hpp"
#include "opforge/cells.hpp"
#include "opforge/io.hpp"
#include "opforge/mapping.hpp"
#include "opforge/operad.hpp"
#include "opforge/wb.hpp"

namespace opforge::cli {

// Runs the acceptance suite and writes one line per criterion; returns the
// exit status.
using SelftestFn = std::function<int(std::uint64_t seed, const std::vector<std::size_t>& only, std::ostream& out)>;

// The input parsed, but the data violate a precondition or a law.
struct ValidationFailure : std::runtime_error {
  Json witness;
  ValidationFailure(const std::string& what, Json w) : std::runtime_error(what), witness(std::move(w)) {}
};

inline std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) throw ParseError(std::string("bad ") + what + ": " + s);
  return static_cast<std::size_t>(v);
}

// "free:m2,c3:4" is the free operad on m (arity 2) and c (arity 3) truncated
// at arity 4.
inline FreeTrunc parse_free(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos) throw ParseError("free operad spec is free:<gens>:<bound>");
  std::vector<Generator> gens;
  std::stringstream ss(spec.substr(0, colon));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t d = tok.size();
    while (d > 0 && std::isdigit(static_cast<unsigned char>(tok[d - 1]))) --d;
    if (d == 0 || d == tok.size()) throw ParseError("free generator is <name><arity>: " + tok);
    gens.push_back({tok.substr(0, d), parse_count(tok.substr(d), "generator arity")});
  }
  try {
    return FreeTrunc(std::move(gens), parse_count(spec.substr(colon + 1), "truncation bound"));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

template <class F>
auto with_operad(const std::string& name, F&& f) {
  if (name == "assoc") return f(Assoc{});
  if (name == "com") return f(Com{});
  if (name.rfind("end:", 0) == 0) {
    const std::size_t q = parse_count(name.substr(4), "end base");
    if (q < 1) throw ParseError("end:<q> needs q >= 1");
    return f(End(q));
  }
  if (name.rfind("free:", 0) == 0) return f(parse_free(name.substr(5)));
  throw ParseError("unknown operad: " + name);
}

// Budget from the flag, else from OPERAD_FORGE_BUDGET, else unlimited.
inline std::size_t resolve_budget(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OPERAD_FORGE_BUDGET")) return parse_count(env, "OPERAD_FORGE_BUDGET");
  return std::numeric_limits<std::size_t>::max();
}

template <Operad O>
Elem<O> element_from_json(const O& op, const Json& j) {
  try {
    return op.from_json(j);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad element: ") + e.what());
  }
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("input needs a \"") + key + "\" field");
  return j[key];
}

inline std::size_t index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) throw ParseError(std::string("\"") + key + "\" must be a positive integer");
  return v.get<std::size_t>();
}

// Normalization rejects raw data that violate the shape rules; that is a
// validation failure, not a parse error.
template <Operad O>
BVOf<O> read_bv(const O& op, const Json& j) {
  auto raw = bv_tree_from_json(op, j);
  try {
    return bv_normalize(op, raw);
  } catch (const std::invalid_argument& e) {
    throw ValidationFailure(e.what(), {{"point", j}});
  }
}

template <Operad O>
WBOf<O> read_wb(const O& op, const Json& j) {
  auto raw = wb_raw_from_json(op, j);
  try {
    return wb_normalize(op, raw);
  } catch (const std::invalid_argument& e) {
    throw ValidationFailure(e.what(), {{"point", j}});
  }
}

// ---------------------------------------------------------------------------
// Kernels by name

// Table files: {"default": "constant", "entries": [...]}; loop entries are
// {"point": bv, "value": element, "window": [lo, hi]?}, bimodule entries
// {"point": wb, "value": element}, with an optional "trivial" element.
inline Json read_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read kernel table " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("kernel table: ") + e.what());
  }
  if (j.value("default", std::string()) != "constant")
    throw ParseError("kernel table must declare \"default\": \"constant\"");
  if (!j.contains("entries") || !j["entries"].is_array()) throw ParseError("kernel table needs an \"entries\" array");
  return j;
}

inline std::string table_path(const std::string& kernel) {
  if (kernel.rfind("table:", 0) != 0 || kernel.size() == 6) throw ParseError("kernel is constant or table:<file>");
  return kernel.substr(6);
}

template <Operad O>
LoopElement<O, O> loop_kernel(const O& op, const std::string& kernel) {
  const auto eta = identity_map<O>();
  if (kernel == "constant") return constant_loop(op, eta);
  const Json j = read_table_file(table_path(kernel));
  LoopTable<O, O> t;
  for (const auto& e : j["entries"]) {
    typename LoopTable<O, O>::Entry entry{read_bv(op, field(e, "point")), std::nullopt,
                                          element_from_json(op, field(e, "value"))};
    if (e.contains("window")) {
      const Json& w = e["window"];
      if (!w.is_array() || w.size() != 2) throw ParseError("a window is a pair [lo, hi]");
      entry.window = Interval{rational_from_json(w[0]), rational_from_json(w[1])};
    }
    if (!bv_is_prime(entry.point)) throw ValidationFailure("loop table keys must be prime", e);
    if (op.arity(entry.value) != entry.point.arity()) throw ValidationFailure("table value has the wrong arity", e);
    t.entries.push_back(std::move(entry));
  }
  return table_loop(op, op, eta, t);
}

template <Operad O>
BimodMapElement<O, O> bimod_kernel(const O& op, const std::string& kernel) {
  const auto eta = identity_map<O>();
  if (kernel == "constant") return eta_mu_tilde(op, eta);
  const Json j = read_table_file(table_path(kernel));
  BimodTable<O, O> t;
  for (const auto& e : j["entries"]) {
    auto p = read_wb(op, field(e, "point"));
    if (p.is_trivial() || !wb_is_prime(p)) throw ValidationFailure("bimodule table keys must be prime", e);
    auto v = element_from_json(op, field(e, "value"));
    if (op.arity(v) != p.arity()) throw ValidationFailure("table value has the wrong arity", e);
    t.entries.push_back({std::move(p), std::move(v)});
  }
  if (j.contains("trivial")) t.trivial = element_from_json(op, j["trivial"]);
  return table_bimodule_map(op, op, eta, t);
}

// ---------------------------------------------------------------------------

struct Options {
  std::string operad = "assoc";
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  std::string input, output;
  std::string kind = "bv";
  std::string format = "json";
  std::vector<std::string> kernels;
  std::size_t k = 0, l = 0;
  std::optional<std::size_t> level;
  bool census = false, nontrivial = false, validate = false;
  std::size_t samples = 100;
  std::vector<std::size_t> only;
};

inline Json read_json(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("input is not JSON: ") + e.what());
  }
}

// Seeded sample points for --validate: sub-points of the input under every
// prime decomposition, its orbit under a few permutations, and the trivial
// tree. Deterministic in the seed.
template <Operad O>
std::vector<WBOf<O>> validation_samples(const O& op, const WBOf<O>& y, std::uint64_t seed, std::size_t n) {
  std::vector<WBOf<O>> ys{wb_trivial(op), y};
  for (const auto& p : wb_decompose(op, y).pieces) ys.push_back(p.point);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(y.arity());
  for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
  while (ys.size() < n) {
    std::shuffle(idx.begin(), idx.end(), rng);
    ys.push_back(wb_act(op, y, Permutation(idx)));
  }
  return ys;
}

template <Operad O>
std::vector<Elem<O>> validation_elements(const O& op) {
  std::vector<Elem<O>> es{op.unit()};
  for (std::size_t n : {0, 2}) {
    try {
      for (const auto& a : op.elements(n)) es.push_back(a);
    } catch (const std::exception&) {
    }
  }
  return es;
}

// Commands that read a point of a named operad.
template <Operad O>
std::string operad_command(const std::string& cmd, const O& op, const Options& o, const Json& in) {
  auto dump = [](const Json& j) { return j.dump(2) + "\n"; };
  if (cmd == "normalize-bv") return dump(bv_to_json(op, read_bv(op, in)));
  if (cmd == "normalize-wb") return dump(wb_to_json(op, read_wb(op, in)));
  if (cmd == "compose-bv") {
    const auto x = read_bv(op, field(in, "x")), y = read_bv(op, field(in, "y"));
    const std::size_t i = index_field(in, "i");
    if (i < 1 || i > x.arity()) throw ValidationFailure("compose index out of range", in);
    return dump(bv_to_json(op, bv_compose(op, x, i, y)));
  }
  if (cmd == "bimod-left") {
    const auto a = element_from_json(op, field(in, "a"));
    std::vector<WBOf<O>> xs;
    for (const auto& x : field(in, "xs")) xs.push_back(read_wb(op, x));
    if (xs.size() != op.arity(a)) throw ValidationFailure("need one point per input of a", in);
    return dump(wb_to_json(op, wb_left(op, a, xs)));
  }
  if (cmd == "bimod-right") {
    const auto x = read_wb(op, field(in, "x"));
    const std::size_t i = index_field(in, "i");
    const auto a = element_from_json(op, field(in, "a"));
    if (i < 1 || i > x.arity()) throw ValidationFailure("right action index out of range", in);
    return dump(wb_to_json(op, wb_right(op, x, i, a)));
  }
  if (cmd == "mu") return dump(op.to_json(mu(op, read_bv(op, in))));
  if (cmd == "mu-tilde") return dump(op.to_json(mu_tilde(op, read_wb(op, in))));
  if (cmd == "prime") {
    Json comps = Json::array();
    bool prime = false;
    if (o.kind == "bv") {
      const auto x = read_bv(op, in);
      prime = bv_is_prime(x);
      for (const auto& c : bv_prime_components(op, x)) comps.push_back(bv_to_json(op, c));
    } else {
      const auto x = read_wb(op, in);
      prime = !x.is_trivial() && wb_is_prime(x);
      for (const auto& c : wb_prime_components(op, x)) comps.push_back(wb_to_json(op, c));
    }
    return dump({{"prime", prime}, {"components", comps}});
  }
  if (cmd == "filtration") {
    if (o.kind == "bv") {
      const auto x = read_bv(op, in);
      return dump({{"k", o.k},
                   {"l", o.l},
                   {"geometricInputs", bv_geometric_inputs(x)},
                   {"inFiltration", bv_filtration(op, x, o.k, o.l)},
                   {"inLevel", bv_in_level(op, x, o.k)}});
    }
    const auto x = read_wb(op, in);
    return dump({{"k", o.k},
                 {"l", o.l},
                 {"geometricInputs", wb_geometric_inputs(x)},
                 {"auxVertices", wb_aux_vertices(x)},
                 {"inFiltration", wb_filtration(op, x, o.k, o.l)},
                 {"inLevel", wb_in_level(op, x, o.k)}});
  }
  if (cmd == "cells") {
    // Classification of raw data; relation (iv) is not applied first.
    if (o.kind == "bv") {
      auto raw = bv_tree_from_json(op, in);
      try {
        bv_check_raw(op, raw);
      } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what(), {{"point", in}});
      }
      return dump({{"k", o.k}, {"l", o.l}, {"cell", to_string(x_cell_membership(op, raw, o.k, o.l))}});
    }
    auto raw = wb_raw_from_json(op, in);
    YFlags f;
    try {
      f = y_cell_membership(op, raw, o.k, o.l);
    } catch (const std::invalid_argument& e) {
      throw ValidationFailure(e.what(), {{"point", in}});
    }
    return dump({{"k", o.k},
                 {"l", o.l},
                 {"index", upsilon_to_json(upsilon_of(raw))},
                 {"inCell", f.in_cell},
                 {"boundary", f.boundary},
                 {"interior", f.interior},
                 {"y1", f.y1},
                 {"y2", f.y2},
                 {"y12", f.y12},
                 {"dprime", f.dprime}});
  }
  if (cmd == "act") {
    const auto c = cubes_from_json(in);
    const auto y = read_wb(op, field(in, "point"));
    std::vector<BimodMapElement<O, O>> fs;
    for (std::size_t j = 0; j < c.cubes().size(); ++j)
      fs.push_back(bimod_kernel(op, o.kernels.empty() ? "constant" : o.kernels[std::min(j, o.kernels.size() - 1)]));
    const auto f = alpha(op, op, c, fs);
    if (o.validate) {
      const auto r = validate_bimodule_map(op, op, f, validation_samples(op, y, o.seed, o.samples),
                                           validation_elements(op));
      if (!r.ok()) throw ValidationFailure("alpha is not a bimodule map on the samples", r.to_json());
    }
    return dump(op.to_json(f(y)));
  }
  if (cmd == "deloop") {
    const auto y = read_wb(op, in);
    const auto g = loop_kernel(op, o.kernels.empty() ? "constant" : o.kernels.front());
    if (o.validate) {
      std::vector<BVOf<O>> xs{bv_unit(op)};
      for (const auto* v : preorder(y.tree())) {
        xs.push_back(v->label.x);
        for (const auto& c : bv_prime_components(op, v->label.x)) xs.push_back(c);
      }
      const std::vector<Rational> ts{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
      auto r = validate_loop(op, op, g, xs, ts);
      r.merge(validate_bimodule_map(op, op, xi(op, op, g), validation_samples(op, y, o.seed, o.samples),
                                    validation_elements(op)));
      if (!r.ok()) throw ValidationFailure("the kernel is not a loop on the samples", r.to_json());
    }
    return dump(op.to_json(xi(op, op, g)(y)));
  }
  if (cmd == "export-dot") {
    if (o.kind == "bv") return bv_to_dot(op, read_bv(op, in));
    return wb_to_dot(op, read_wb(op, in));
  }
  throw ParseError("unknown command " + cmd);
}

// Commands over tree combinatorics only.
inline std::string cells_command(const std::string& cmd, const Options& o, std::istream& in) {
  auto dump = [](const Json& j) { return j.dump(2) + "\n"; };
  const std::size_t budget = resolve_budget(o.budget);
  auto need_kl = [&] {
    if (o.k == 0 || o.l == 0) throw ParseError(cmd + " needs --k and --l >= 1");
  };
  if (cmd == "cells") {
    need_kl();
    const auto us = enumerate_upsilon(o.k, o.l, o.nontrivial, budget);
    Json xs = Json::array();
    for (const auto& u : us) xs.push_back(upsilon_to_json(u));
    return dump({{"k", o.k}, {"l", o.l}, {"nontrivial", o.nontrivial}, {"count", us.size()}, {"indices", xs}});
  }
  if (cmd == "graph" || cmd == "reedy") {
    need_kl();
    auto g = build_graph(o.k, o.l, budget);
    if (o.level) {
      if (o.l < 2 || *o.level > o.l - 2) throw ParseError("--level must lie in 0..l-2");
      g = subgraph_i(g, *o.level);
    }
    if (cmd == "reedy") return dump(reedy_to_json(reedy_of(g)));
    if (o.format == "dot") return graph_to_dot(g);
    return dump(graph_to_json(g));
  }
  if (cmd == "homotopy-h") {
    const Json j = read_json(in);
    UpsilonIndex u;
    try {
      u = upsilon_from_json(field(j, "index"));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad index: ") + e.what());
    }
    const auto p = height_point_from_json(field(j, "point"));
    const auto t = rational_from_json(field(j, "u"));
    try {
      return dump(height_point_to_json(homotopy_H(u, p, t)));
    } catch (const std::invalid_argument& e) {
      throw ValidationFailure(e.what(), j);
    }
  }
  throw ParseError("unknown command " + cmd);
}

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err,
               const SelftestFn& selftest = {}) {
  Options o;
  CLI::App app{"Operad resolutions, their cells and mapping-space kernels."};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--operad", o.operad, "assoc | com | end:<q> | free:<gens>:<bound>");
  app.add_option("--seed", o.seed, "seed for sampling");
  app.add_option("--budget", o.budget, "cap on enumeration sizes (default OPERAD_FORGE_BUDGET)");
  app.add_option("--input", o.input, "read from a file instead of standard input");
  app.add_option("--output", o.output, "write to a file instead of standard output");

  auto add_kind = [&](CLI::App* c) {
    c->add_option("--kind", o.kind, "bv | wb")->check(CLI::IsMember({"bv", "wb"}));
  };
  auto add_kl = [&](CLI::App* c) {
    c->add_option("--k", o.k, "geometric inputs");
    c->add_option("--l", o.l, "vertices");
  };
  auto add_kernel = [&](CLI::App* c) {
    c->add_option("--kernel", o.kernels, "constant | table:<file>; repeat for one kernel per cube");
    c->add_flag("--validate", o.validate, "check the kernel laws on seeded samples first");
    c->add_option("--samples", o.samples, "sample count for --validate");
  };
  const std::vector<std::pair<std::string, std::string>> point_cmds{
      {"normalize-bv", "canonical form of raw BV data"},
      {"normalize-wb", "canonical form of raw WB data"},
      {"compose-bv", "{x, i, y} -> x o_i y in BV"},
      {"bimod-left", "{a, xs} -> left action"},
      {"bimod-right", "{x, i, a} -> right action"},
      {"mu", "BV point -> its value in the operad"},
      {"mu-tilde", "WB point -> its value in the operad"},
      {"prime", "prime decomposition"},
      {"filtration", "filtration and level membership"},
      {"act", "{cubes, point} -> alpha of named kernels at the point"},
      {"deloop", "WB point -> xi of a named loop at the point"},
      {"export-dot", "Graphviz rendering of a point"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : point_cmds) subs[name] = app.add_subcommand(name, help);
  add_kind(subs["prime"]);
  add_kind(subs["filtration"]);
  add_kl(subs["filtration"]);
  add_kind(subs["export-dot"]);
  add_kernel(subs["act"]);
  add_kernel(subs["deloop"]);
  auto* cells = app.add_subcommand("cells", "classify raw data into cells, or list the census with --census");
  add_kind(cells);
  add_kl(cells);
  cells->add_flag("--census", o.census, "list the planar indices of the (k, l) census");
  cells->add_flag("--nontrivial", o.nontrivial, "with --census: main trees with at least two vertices");
  auto* graph = app.add_subcommand("graph", "the contraction graph of the (k, l) census");
  add_kl(graph);
  graph->add_option("--format", o.format, "json | dot")->check(CLI::IsMember({"json", "dot"}));
  graph->add_option("--level", o.level, "keep levels 0 and i only");
  auto* reedy = app.add_subcommand("reedy", "object and morphism tables of the Reedy category");
  add_kl(reedy);
  reedy->add_option("--level", o.level, "keep levels 0 and i only");
  app.add_subcommand("homotopy-h", "{index, point, u} -> the homotopy H at time u");
  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_option("--only", o.only, "criterion ids")->check(CLI::Range(1, 9));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  std::ifstream file_in;
  std::istream* src = &in;
  if (!o.input.empty()) {
    file_in.open(o.input);
    if (!file_in) {
      err << "cannot read " << o.input << "\n";
      return 2;
    }
    src = &file_in;
  }
  std::ostringstream result;
  int status = 0;
  try {
    if (cmd == "selftest") {
      if (!selftest) throw ParseError("selftest is not available in this build");
      status = selftest(o.seed, o.only, result);
    } else if (cmd == "graph" || cmd == "reedy" || cmd == "homotopy-h" || (cmd == "cells" && o.census)) {
      result << cells_command(cmd, o, *src);
    } else {
      const Json j = read_json(*src);
      result << with_operad(o.operad, [&](const auto& op) { return operad_command(cmd, op, o, j); });
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationFailure& e) {
    result << Json{{"error", e.what()}, {"witness", e.witness}}.dump(2) << "\n";
    status = 1;
  } catch (const BudgetExceeded& e) {
    result << Json{{"error", e.what()}, {"witness", {{"budget", resolve_budget(o.budget)}}}}.dump(2) << "\n";
    status = 1;
  } catch (const std::exception& e) {
    // Remaining library errors (index out of range, truncation) are
    // precondition failures on parsed data.
    result << Json{{"error", e.what()}, {"witness", Json::object()}}.dump(2) << "\n";
    status = 1;
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) {
      err << "cannot write " << o.output << "\n";
      return 2;
    }
    f << result.str();
  } else {
    out << result.str();
  }
  return status;
}

}  // namespace opforge::cli
