#include "latent_order/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "latent_order/error.hpp"

namespace latent_order {

namespace {

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

double as_entry(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "-inf") return kMasked;
  throw ParseError(where + ": expected a number or \"-inf\"");
}

}  // namespace

Json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": malformed JSON (" + e.what() + ")");
  }
}

RootedGraph graph_from_json(const Json& j) {
  RootedGraph g;
  const Json& nodes = member(j, "nodes", "instance");
  if (!nodes.is_array()) throw ParseError("nodes: expected an array");
  std::set<int> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    Node node;
    node.id = as_int(member(nodes[i], "id", where), where + ".id");
    if (!ids.insert(node.id).second)
      throw ParseError(where + ".id: duplicate node id " + std::to_string(node.id));
    node.label = as_string(member(nodes[i], "label", where), where + ".label");
    if (const auto it = nodes[i].find("copyable_from"); it != nodes[i].end()) {
      if (!it->is_array()) throw ParseError(where + ".copyable_from: expected an array");
      std::set<int> from;
      for (std::size_t k = 0; k < it->size(); ++k)
        from.insert(as_int((*it)[k], where + ".copyable_from[" + std::to_string(k) + "]"));
      node.copyable_from.assign(from.begin(), from.end());
    }
    g.nodes.push_back(std::move(node));
  }
  // Ids must be dense, but they may be listed in any order.
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });

  if (const auto it = j.find("edges"); it != j.end()) {
    if (!it->is_array()) throw ParseError("edges: expected an array");
    for (std::size_t e = 0; e < it->size(); ++e) {
      const std::string where = "edges[" + std::to_string(e) + "]";
      const Json& ej = (*it)[e];
      Edge edge;
      edge.src = as_int(member(ej, "src", where), where + ".src");
      edge.dst = as_int(member(ej, "dst", where), where + ".dst");
      if (const auto lab = ej.find("label"); lab != ej.end())
        edge.label = as_string(*lab, where + ".label");
      g.edges.push_back(std::move(edge));
    }
  }
  g.root = as_int(member(j, "root", "instance"), "root");
  try {
    check_graph(g);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return g;
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  const Json& tokens = member(j, "tokens", "instance");
  if (!tokens.is_array()) throw ParseError("tokens: expected an array");
  for (std::size_t k = 0; k < tokens.size(); ++k)
    inst.tokens.push_back(as_string(tokens[k], "tokens[" + std::to_string(k) + "]"));
  inst.graph = graph_from_json(j);
  try {
    check_instance(inst);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return inst;
}

Instance parse_instance(std::string_view text) {
  return instance_from_json(parse_json_text(text, "instance"));
}

Json graph_to_json(const RootedGraph& graph) {
  Json nodes = Json::array();
  for (const auto& node : graph.nodes)
    nodes.push_back({{"id", node.id}, {"label", node.label}, {"copyable_from", node.copyable_from}});
  Json edges = Json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
  return {{"nodes", nodes}, {"edges", edges}, {"root", graph.root}};
}

Json instance_to_json(const Instance& instance) {
  Json j = graph_to_json(instance.graph);
  j["tokens"] = instance.tokens;
  return j;
}

std::string serialize_instance(const Instance& instance) {
  return instance_to_json(instance).dump();
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (double x : m.row(r)) {
      if (is_masked(x))
        row.push_back("-inf");
      else
        row.push_back(x);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ParseError(field + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw ParseError(field + "[0]: expected an array");
  const std::size_t cols = j[0].size();
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string where = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(where + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      out(r, c) = as_entry(j[r][c], where + "[" + std::to_string(c) + "]");
  }
  return out;
}

Json order_to_json(const GenerationOrder& order) {
  return {{"n", order.n}, {"m", order.m}, {"discrete", order.discrete},
          {"matrix", matrix_to_json(order.matrix)}};
}

GenerationOrder order_from_json(const Json& j, const std::string& field) {
  GenerationOrder order;
  if (j.is_array()) {
    order.matrix = matrix_from_json(j, field);
    if (order.matrix.cols() < 2) throw ParseError(field + ": need at least 2 columns");
    order.m = order.matrix.cols() - 1;
    if (order.matrix.rows() <= order.m) throw ParseError(field + ": need more than m rows");
    order.n = order.matrix.rows() - order.m;
    order.discrete = true;
    for (double x : order.matrix.values())
      if (x != 0.0 && x != 1.0) order.discrete = false;
    return order;
  }
  order.matrix = matrix_from_json(member(j, "matrix", field), field + ".matrix");
  const int n = as_int(member(j, "n", field), field + ".n");
  const int m = as_int(member(j, "m", field), field + ".m");
  if (n < 1 || m < 1) throw ParseError(field + ": n and m must be positive");
  order.n = static_cast<std::size_t>(n);
  order.m = static_cast<std::size_t>(m);
  if (order.matrix.rows() != order.n + order.m || order.matrix.cols() != order.m + 1)
    throw ParseError(field + ".matrix: shape does not match n and m");
  if (const auto it = j.find("discrete"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError(field + ".discrete: expected a boolean");
    order.discrete = it->get<bool>();
  }
  return order;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace latent_order
