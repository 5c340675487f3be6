#pragma once

#include "concierge/types.hpp"

#include <json.hpp>

namespace concierge {

using Json = nlohmann::json;
// Key order is part of the export format: byte-identical output across runs.
using OrderedJson = nlohmann::ordered_json;

void to_json(OrderedJson& j, const TopicLabel& t);
void to_json(OrderedJson& j, const EntitySpan& s);
void to_json(OrderedJson& j, const ModelVersions& v);
void to_json(OrderedJson& j, const Annotations& a);
void to_json(OrderedJson& j, const AnnotatedPost& p);

// Throws concierge::Error(kValidation) on schema violations.
TopicLabel topic_label_from_json(const Json& j);
EntitySpan entity_span_from_json(const Json& j);
ModelVersions model_versions_from_json(const Json& j);
Annotations annotations_from_json(const Json& j);

}  // namespace concierge
