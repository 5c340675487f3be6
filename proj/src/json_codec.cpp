#include "concierge/json_codec.hpp"

#include "concierge/errors.hpp"
#include "concierge/timeutil.hpp"

namespace concierge {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kValidation, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw Error(ErrorCode::kValidation, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <typename E>
E require_enum(const Json& j, const char* key, std::optional<E> (*parse)(std::string_view)) {
  const std::string text = require_string(j, key);
  auto value = parse(text);
  if (!value) throw Error(ErrorCode::kValidation, std::string("bad value for '") + key + "'", text);
  return *value;
}

}  // namespace

void to_json(OrderedJson& j, const TopicLabel& t) {
  j = OrderedJson{{"name", t.name}, {"matched_terms", t.matched_terms}, {"rescue", t.rescue}};
}

void to_json(OrderedJson& j, const EntitySpan& s) {
  j = OrderedJson{{"surface", s.surface},   {"canonical", s.canonical},
                  {"start", s.start},       {"end", s.end},
                  {"type", to_string(s.type)}, {"method", to_string(s.method)},
                  {"score", s.score}};
}

void to_json(OrderedJson& j, const ModelVersions& v) {
  j = OrderedJson{{"classifier", v.classifier},
                  {"topics", v.topics},
                  {"gazetteer", v.gazetteer},
                  {"sentiment", v.sentiment},
                  {"embeddings", v.embeddings}};
}

void to_json(OrderedJson& j, const Annotations& a) {
  j = OrderedJson{{"topic", a.topic},         {"entities", a.entities},
                  {"sentiment", to_string(a.sentiment)}, {"compound", a.compound},
                  {"coverage", a.coverage},   {"versions", a.versions}};
}

void to_json(OrderedJson& j, const AnnotatedPost& p) {
  j = OrderedJson{{"id", p.post.id},
                  {"text", p.post.text},
                  {"timestamp", timeutil::format_rfc3339(p.post.timestamp)},
                  {"source", p.post.source},
                  {"label", p.label == Label::kUnlabeled ? OrderedJson(nullptr) : OrderedJson(to_string(p.label))},
                  {"label_source", to_string(p.label_source)},
                  {"label_confidence", p.label_confidence}};
  if (p.annotations) j["annotations"] = *p.annotations;
}

TopicLabel topic_label_from_json(const Json& j) {
  TopicLabel t;
  t.name = require_string(j, "name");
  if (j.contains("matched_terms")) t.matched_terms = j.at("matched_terms").get<std::vector<std::string>>();
  t.rescue = j.value("rescue", false);
  return t;
}

EntitySpan entity_span_from_json(const Json& j) {
  EntitySpan s;
  s.surface = require_string(j, "surface");
  s.canonical = j.value("canonical", s.surface);
  s.start = require(j, "start").get<std::size_t>();
  s.end = require(j, "end").get<std::size_t>();
  s.type = require_enum<EntityType>(j, "type", parse_entity_type);
  s.method = j.contains("method") ? require_enum<MatchMethod>(j, "method", parse_match_method) : MatchMethod::kExact;
  s.score = j.value("score", 1.0);
  if (s.start >= s.end) throw Error(ErrorCode::kValidation, "entity span must have start < end");
  return s;
}

ModelVersions model_versions_from_json(const Json& j) {
  ModelVersions v;
  v.classifier = j.value("classifier", 0);
  v.topics = j.value("topics", 0);
  v.gazetteer = j.value("gazetteer", 0);
  v.sentiment = j.value("sentiment", 0);
  v.embeddings = j.value("embeddings", 0);
  return v;
}

Annotations annotations_from_json(const Json& j) {
  Annotations a;
  a.topic = topic_label_from_json(require(j, "topic"));
  for (const auto& e : require(j, "entities")) a.entities.push_back(entity_span_from_json(e));
  a.sentiment = require_enum<SentimentClass>(j, "sentiment", parse_sentiment_class);
  a.compound = j.value("compound", 0.0);
  a.coverage = j.value("coverage", 0.0);
  if (j.contains("versions")) a.versions = model_versions_from_json(j.at("versions"));
  return a;
}

}  // namespace concierge
