#pragma once

// JSON-lines serialization. Field names are the type field names; key order
// is fixed so identical results serialize to identical bytes.

#include <string>

#include <json.hpp>

#include "treemix/bounds.hpp"
#include "treemix/embed.hpp"
#include "treemix/verify.hpp"

namespace treemix {

using Json = nlohmann::ordered_json;

Json to_json(const BoundBreakdown& b);
Json to_json(const TailEstimate& t);
Json to_json(const DavydovResult& d);
Json to_json(const FiniteSpace& s);
Json to_json(const NodeId& v);

FiniteSpace finite_space_from_json(const Json& j);

/// One compact line, newline-terminated.
std::string json_line(const Json& j);

}  // namespace treemix
