#pragma once

/** @file io.hpp
 *  @brief JSON encodings of trees, BV / WB points and cube configurations,
 *  plus Graphviz export.
 */

#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opforge/bv.hpp"
#include "opforge/cubes.hpp"
#include "opforge/report.hpp"
#include "opforge/wb.hpp"

namespace opforge {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json rational_to_json(const Rational& r) { return r.str(); }
inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ParseError("rational must be a string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad rational: ") + e.what());
  }
}

// {"node": N, "sigma": [...]}, N = {"leaf": j} | {"children": [N...]}; the
// j-th planar leaf carries label sigma[j-1].
template <class V, class E>
Json shape_to_json(const Node<V, E>& t) {
  std::size_t next = 0;
  std::function<Json(const Node<V, E>&)> go = [&](const Node<V, E>& n) -> Json {
    if (n.is_leaf()) return {{"leaf", ++next}};
    Json cs = Json::array();
    for (const auto& c : n.inputs) cs.push_back(go(c));
    return {{"children", cs}};
  };
  Json out;
  out["node"] = go(t);
  out["sigma"] = leaf_labels(t);
  return out;
}

template <class V, class E>
Node<V, E> shape_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("node")) throw ParseError("tree needs a \"node\" field");
  std::size_t next = 0;
  std::function<Node<V, E>(const Json&)> go = [&](const Json& n) -> Node<V, E> {
    if (!n.is_object()) throw ParseError("tree node must be an object");
    if (n.contains("leaf")) {
      if (!n["leaf"].is_number_unsigned() || n["leaf"].get<std::size_t>() != ++next)
        throw ParseError("leaves must be numbered 1..n in planar order");
      return Node<V, E>::make_leaf(next);
    }
    if (!n.contains("children") || !n["children"].is_array()) throw ParseError("vertex needs a \"children\" array");
    Node<V, E> v;
    for (const auto& c : n["children"]) v.inputs.push_back(go(c));
    return v;
  };
  Node<V, E> t = go(j["node"]);
  if (j.contains("sigma")) {
    std::vector<std::size_t> sg;
    try {
      sg = j["sigma"].get<std::vector<std::size_t>>();
      t = with_sigma(t, Permutation::from_one_based(sg));
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad sigma: ") + e.what());
    }
  }
  return t;
}

// BV data: the shape plus "labels" (preorder) and "edgeParams" keyed by the
// preorder id of the vertex above the edge.
template <Operad O>
Json bv_tree_to_json(const O& op, const BVTree<Elem<O>>& t) {
  Json out = shape_to_json(t);
  Json labels = Json::array();
  Json params = Json::object();
  const auto vs = preorder(t);
  for (std::size_t id = 0; id < vs.size(); ++id) {
    labels.push_back(op.to_json(vs[id]->label));
    if (id != 0) params[std::to_string(id)] = rational_to_json(vs[id]->edge);
  }
  out["labels"] = labels;
  out["edgeParams"] = params;
  return out;
}

template <Operad O>
Json bv_to_json(const O& op, const BVOf<O>& x) {
  return bv_tree_to_json(op, x.tree());
}

template <Operad O>
BVTree<Elem<O>> bv_tree_from_json(const O& op, const Json& j) {
  auto t = shape_from_json<Elem<O>, Rational>(j);
  if (t.is_leaf()) throw ParseError("bv point needs at least one vertex");
  if (!j.contains("labels") || !j["labels"].is_array()) throw ParseError("bv point needs a \"labels\" array");
  const Json& labels = j["labels"];
  const Json params = j.value("edgeParams", Json::object());
  std::size_t id = 0;
  std::function<void(BVTree<Elem<O>>&)> go = [&](BVTree<Elem<O>>& n) {
    if (n.is_leaf()) return;
    const std::size_t me = id++;
    if (me >= labels.size()) throw ParseError("too few labels");
    try {
      n.label = op.from_json(labels[me]);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad label: ") + e.what());
    }
    if (me != 0) {
      const std::string key = std::to_string(me);
      if (!params.contains(key)) throw ParseError("missing edge parameter for vertex " + key);
      n.edge = rational_from_json(params[key]);
    }
    for (auto& c : n.inputs) go(c);
  };
  go(t);
  if (id != labels.size()) throw ParseError("too many labels");
  return t;
}

// WB data: the main shape plus "vertices" (preorder) of {"t", "bv"}.
template <Operad O>
Json wb_to_json(const O& op, const WBOf<O>& x) {
  Json out = shape_to_json(x.tree());
  Json vs = Json::array();
  for (const auto* v : preorder(x.tree()))
    vs.push_back({{"t", rational_to_json(v->label.height)}, {"bv", bv_to_json(op, v->label.x)}});
  out["vertices"] = vs;
  return out;
}

template <Operad O>
WBRawTree<Elem<O>> wb_raw_from_json(const O& op, const Json& j) {
  auto t = shape_from_json<WBRawLabel<Elem<O>>, Empty>(j);
  const Json vs = j.value("vertices", Json::array());
  std::size_t id = 0;
  std::function<void(WBRawTree<Elem<O>>&)> go = [&](WBRawTree<Elem<O>>& n) {
    if (n.is_leaf()) return;
    const std::size_t me = id++;
    if (me >= vs.size()) throw ParseError("too few main vertices");
    if (!vs[me].contains("t") || !vs[me].contains("bv")) throw ParseError("main vertex needs \"t\" and \"bv\"");
    n.label.height = rational_from_json(vs[me]["t"]);
    n.label.aux = bv_tree_from_json(op, vs[me]["bv"]);
    for (auto& c : n.inputs) go(c);
  };
  go(t);
  if (id != vs.size()) throw ParseError("too many main vertices");
  return t;
}

inline Json cubes_to_json(const CubeConfig& c) {
  Json cs = Json::array();
  for (const auto& i : c.cubes()) cs.push_back({rational_to_json(i.lo), rational_to_json(i.hi)});
  return {{"cubes", cs}};
}

inline CubeConfig cubes_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("cubes") || !j["cubes"].is_array()) throw ParseError("expected {\"cubes\": [...]}");
  std::vector<Interval> cs;
  for (const auto& c : j["cubes"]) {
    if (!c.is_array() || c.size() != 2) throw ParseError("a cube is a pair [lo, hi]");
    cs.push_back({rational_from_json(c[0]), rational_from_json(c[1])});
  }
  try {
    return CubeConfig(cs);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad cube configuration: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Graphviz

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

template <class V, class E>
void dot_tree_body(std::ostringstream& os, const Node<V, E>& t, const std::string& prefix,
                   const std::function<std::string(const Node<V, E>&)>& vlabel,
                   const std::function<std::string(const Node<V, E>&)>& elabel) {
  std::size_t next = 0;
  std::function<std::string(const Node<V, E>&)> go = [&](const Node<V, E>& n) {
    const std::string id = prefix + std::to_string(next++);
    if (n.is_leaf()) {
      os << "  " << id << " [shape=plaintext,label=\"" << n.leaf << "\"];\n";
      return id;
    }
    os << "  " << id << " [shape=box,label=\"" << dot_escape(vlabel(n)) << "\"];\n";
    for (const auto& c : n.inputs) {
      std::string cid = go(c);
      std::string el = c.is_leaf() ? "" : elabel(c);
      os << "  " << cid << " -> " << id;
      if (!el.empty()) os << " [label=\"" << dot_escape(el) << "\"]";
      os << ";\n";
    }
    return id;
  };
  const std::string root = go(t);
  os << "  " << prefix << "root [shape=point];\n  " << root << " -> " << prefix << "root;\n";
}

template <Operad O>
std::string bv_to_dot(const O& op, const BVOf<O>& x) {
  std::ostringstream os;
  os << "digraph bv {\n  rankdir=BT;\n";
  dot_tree_body<Elem<O>, Rational>(
      os, x.tree(), "n", [&](const BVTree<Elem<O>>& n) { return op.to_json(n.label).dump(); },
      [&](const BVTree<Elem<O>>& n) { return n.edge.str(); });
  os << "}\n";
  return os.str();
}

template <Operad O>
std::string wb_to_dot(const O& op, const WBOf<O>& x) {
  std::ostringstream os;
  os << "digraph wb {\n  rankdir=BT;\n";
  dot_tree_body<WBLabel<Elem<O>>, Empty>(
      os, x.tree(), "n",
      [&](const WBTree<Elem<O>>& n) {
        return "t=" + n.label.height.str() + " " + std::to_string(vertex_count(n.label.x.tree())) + "v mu=" +
               op.to_json(mu(op, n.label.x)).dump();
      },
      [&](const WBTree<Elem<O>>&) { return std::string(); });
  os << "}\n";
  return os.str();
}

}  // namespace opforge
