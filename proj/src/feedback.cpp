#include "concierge/feedback.hpp"

#include "concierge/errors.hpp"
#include "concierge/log.hpp"
#include "concierge/timeutil.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <tuple>

namespace concierge::feedback {

namespace {

std::string make_id(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fb-%06zu", n);
  return buf;
}

nlohmann::json entity_value(const std::string& surface, EntityType type) {
  return {{"surface", surface}, {"type", std::string(to_string(type))}};
}

// {"surface", "type"} with a normalized surface.
std::pair<std::string, EntityType> parse_entity_value(const nlohmann::json& v) {
  if (!v.is_object() || !v.contains("surface") || !v.contains("type") || !v["surface"].is_string() ||
      !v["type"].is_string()) {
    throw Error(ErrorCode::kValidation, "entity feedback needs {\"surface\", \"type\"}");
  }
  auto surface = entities::normalize_surface(v["surface"].get<std::string>());
  if (surface.empty()) throw Error(ErrorCode::kValidation, "empty entity surface");
  auto type = parse_entity_type(v["type"].get<std::string>());
  if (!type) throw Error(ErrorCode::kValidation, "unknown entity type", v["type"].get<std::string>());
  return {surface, *type};
}

std::string string_value(const nlohmann::json& v, const char* what) {
  if (!v.is_string()) throw Error(ErrorCode::kValidation, std::string(what) + " must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(Field f) {
  switch (f) {
    case Field::kLabel: return "label";
    case Field::kTopic: return "topic";
    case Field::kSentiment: return "sentiment";
    case Field::kEntity: return "entity";
  }
  return "label";
}

std::optional<Field> parse_field(std::string_view text) {
  if (text == "label") return Field::kLabel;
  if (text == "topic") return Field::kTopic;
  if (text == "sentiment") return Field::kSentiment;
  if (text == "entity") return Field::kEntity;
  return std::nullopt;
}

nlohmann::ordered_json to_json(const FeedbackRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["post_id"] = r.post_id;
  j["field"] = std::string(to_string(r.field));
  j["proposed"] = nlohmann::ordered_json::parse(r.proposed.dump());
  j["prior"] = nlohmann::ordered_json::parse(r.prior.dump());
  j["submitted_at"] = timeutil::format_rfc3339(r.submitted_at);
  j["session"] = r.session;
  return j;
}

FeedbackRecord record_from_json(const nlohmann::json& j) {
  try {
    FeedbackRecord r;
    r.id = j.at("id").get<std::string>();
    r.post_id = j.at("post_id").get<std::string>();
    auto field = parse_field(j.at("field").get<std::string>());
    if (!field) throw Error(ErrorCode::kValidation, "unknown feedback field");
    r.field = *field;
    r.proposed = j.at("proposed");
    r.prior = j.value("prior", nlohmann::json());
    const auto& ts = j.at("submitted_at");
    auto parsed = ts.is_number_integer() ? std::optional<Timestamp>(ts.get<Timestamp>())
                                         : timeutil::parse(ts.get<std::string>());
    if (!parsed) throw Error(ErrorCode::kValidation, "bad submitted_at");
    r.submitted_at = *parsed;
    r.session = j.value("session", std::string());
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kValidation, "malformed feedback record", ex.what());
  }
}

FeedbackRecord validate_submission(const nlohmann::json& body, const corpus::CorpusView& view,
                                   const std::vector<std::string>& topic_names, Timestamp now) {
  if (!body.is_object()) throw Error(ErrorCode::kValidation, "feedback must be a JSON object");
  if (!body.contains("post_id") || !body["post_id"].is_string()) {
    throw Error(ErrorCode::kValidation, "post_id is required");
  }
  FeedbackRecord r;
  r.post_id = body["post_id"].get<std::string>();
  const AnnotatedPost* post = view.find(r.post_id);
  if (!post) throw Error(ErrorCode::kNotFound, "unknown post", r.post_id);

  if (!body.contains("field") || !body["field"].is_string()) throw Error(ErrorCode::kValidation, "field is required");
  auto field = parse_field(body["field"].get<std::string>());
  if (!field) throw Error(ErrorCode::kValidation, "unknown field", body["field"].get<std::string>());
  r.field = *field;
  if (!body.contains("proposed")) throw Error(ErrorCode::kValidation, "proposed is required");
  const auto& proposed = body["proposed"];

  switch (r.field) {
    case Field::kLabel: {
      const auto value = string_value(proposed, "proposed label");
      auto label = parse_label(value);
      if (!label || *label == Label::kUnlabeled) throw Error(ErrorCode::kValidation, "invalid label", value);
      r.proposed = std::string(to_string(*label));
      r.prior = post->label == Label::kUnlabeled ? nlohmann::json() : nlohmann::json(std::string(to_string(post->label)));
      break;
    }
    case Field::kTopic: {
      const auto value = string_value(proposed, "proposed topic");
      if (value != kUnknownTopic && std::find(topic_names.begin(), topic_names.end(), value) == topic_names.end()) {
        throw Error(ErrorCode::kValidation, "unknown topic", value);
      }
      r.proposed = value;
      r.prior = post->annotations ? nlohmann::json(post->annotations->topic.name) : nlohmann::json();
      break;
    }
    case Field::kSentiment: {
      const auto value = string_value(proposed, "proposed sentiment");
      auto cls = parse_sentiment_class(value);
      if (!cls) throw Error(ErrorCode::kValidation, "invalid sentiment", value);
      r.proposed = std::string(to_string(*cls));
      r.prior = post->annotations ? nlohmann::json(std::string(to_string(post->annotations->sentiment)))
                                  : nlohmann::json();
      break;
    }
    case Field::kEntity: {
      auto [surface, type] = parse_entity_value(proposed);
      r.proposed = entity_value(surface, type);
      r.prior = nlohmann::json();
      if (post->annotations) {
        for (const auto& span : post->annotations->entities) {
          if (entities::normalize_surface(span.surface) == surface || normalize_entity_surface(span.canonical) == surface) {
            r.prior = entity_value(surface, span.type);
            break;
          }
        }
      }
      break;
    }
  }
  if (r.proposed == r.prior) throw Error(ErrorCode::kValidation, "proposed value equals the current value");

  r.submitted_at = now;
  if (body.contains("submitted_at") && !body["submitted_at"].is_null()) {
    const auto& ts = body["submitted_at"];
    std::optional<Timestamp> parsed;
    if (ts.is_number_integer()) parsed = ts.get<Timestamp>();
    else if (ts.is_string()) parsed = timeutil::parse(ts.get<std::string>());
    if (!parsed) throw Error(ErrorCode::kValidation, "invalid submitted_at");
    r.submitted_at = *parsed;
  }
  if (body.contains("session")) r.session = string_value(body["session"], "session");
  return r;
}

FeedbackLog::FeedbackLog(std::filesystem::path path) : path_(std::move(path)) { count_ = read(path_).size(); }

FeedbackRecord FeedbackLog::append(FeedbackRecord record) {
  std::lock_guard lock(mutex_);
  record.id = make_id(count_ + 1);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to feedback log", path_.string());
  out << to_json(record).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "short write to feedback log", path_.string());
  ++count_;
  return record;
}

std::vector<FeedbackRecord> FeedbackLog::records() const {
  std::lock_guard lock(mutex_);
  return read(path_);
}

std::vector<FeedbackRecord> FeedbackLog::read(const std::filesystem::path& path) {
  std::vector<FeedbackRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& ex) {
      log::warn("feedback log " + path.string() + ":" + std::to_string(line_no) + ": skipped: " + ex.what());
    }
  }
  return out;
}

Resolved resolve(const std::vector<FeedbackRecord>& records) {
  // (post, field, surface) -> (submitted_at, log position, record)
  std::map<std::tuple<std::string, Field, std::string>, std::pair<std::pair<Timestamp, std::size_t>, const FeedbackRecord*>>
      latest;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::string surface;
    if (r.field == Field::kEntity) surface = parse_entity_value(r.proposed).first;
    auto key = std::make_tuple(r.post_id, r.field, surface);
    const auto rank = std::make_pair(r.submitted_at, i);
    auto it = latest.find(key);
    if (it == latest.end() || it->second.first < rank) latest.insert_or_assign(key, std::make_pair(rank, &r));
  }
  Resolved out;
  std::map<std::string, std::pair<std::pair<Timestamp, std::size_t>, EntityType>> entity_latest;
  for (const auto& [key, value] : latest) {
    const auto& r = *value.second;
    switch (r.field) {
      case Field::kLabel: out.labels[r.post_id] = *parse_label(r.proposed.get<std::string>()); break;
      case Field::kTopic: out.topics[r.post_id] = r.proposed.get<std::string>(); break;
      case Field::kSentiment: out.sentiments[r.post_id] = *parse_sentiment_class(r.proposed.get<std::string>()); break;
      case Field::kEntity: {
        // The same surface corrected on different posts: latest wins corpus-wide.
        auto [surface, type] = parse_entity_value(r.proposed);
        auto it = entity_latest.find(surface);
        if (it == entity_latest.end() || it->second.first < value.first) {
          entity_latest.insert_or_assign(surface, std::make_pair(value.first, type));
        }
        break;
      }
    }
  }
  for (const auto& [surface, v] : entity_latest) out.entities.emplace_back(surface, v.second);
  return out;
}

}  // namespace concierge::feedback
