#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

using Json = nlohmann::json;

// Instance JSON:
//   {"tokens": [...], "nodes": [{"id", "label", "copyable_from"}],
//    "edges": [{"src", "dst", "label"}], "root": 0}
// Throws ParseError naming the offending field.
Instance parse_instance(std::string_view text);
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& instance);
std::string serialize_instance(const Instance& instance);

// Row-major nested arrays; -inf is written as the string "-inf".
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field);

// {"n", "m", "discrete", "matrix"}. A bare nested array is also accepted when
// n and m are supplied by the caller.
Json order_to_json(const GenerationOrder& order);
GenerationOrder order_from_json(const Json& j, const std::string& field);

Json graph_to_json(const RootedGraph& graph);
RootedGraph graph_from_json(const Json& j);

// Reads a whole file or "-" for stdin. Throws InputError when unreadable.
std::string read_text(const std::string& path);
Json parse_json_text(std::string_view text, const std::string& what);

}  // namespace latent_order
