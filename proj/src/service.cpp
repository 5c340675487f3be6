#include "concierge/service.hpp"

#include "concierge/analytics.hpp"
#include "concierge/errors.hpp"
#include "concierge/json_codec.hpp"
#include "concierge/log.hpp"
#include "concierge/recommender.hpp"
#include "concierge/timeutil.hpp"

#include <charconv>

namespace concierge::service {

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const auto start = i;
    while (i < path.size() && path[i] != '/') ++i;
    if (i > start) parts.push_back(path.substr(start, i - start));
  }
  return parts;
}

std::optional<std::string> param(const QueryParams& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::size_t positive(const QueryParams& q, const std::string& key, std::size_t fallback) {
  auto v = param(q, key);
  if (!v) return fallback;
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size() || out == 0) {
    throw Error(ErrorCode::kInvalidArgument, key + " must be a positive integer", *v);
  }
  return out;
}

std::vector<std::string> topic_names(const pipeline::PipelineSnapshot& snap) { return snap.resources->lexicon.names(); }

OrderedJson post_json(const AnnotatedPost& p) {
  OrderedJson j;
  to_json(j, p);
  return j;
}

[[noreturn]] void not_found(std::string_view path) {
  throw Error(ErrorCode::kNotFound, "no such route", std::string(path));
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kContract: return 409;
    case ErrorCode::kValidation: return 422;
    case ErrorCode::kIo:
    case ErrorCode::kInternal: return 500;
  }
  return 500;
}

nlohmann::ordered_json error_body(const Error& error) {
  return {{"code", error_code_name(error.code())}, {"message", error.what()}, {"detail", error.detail()}};
}

Service::Service(pipeline::SnapshotPtr initial)
    : snapshot_(std::move(initial)), log_(pipeline::StatePaths{snapshot_->resources->config.state_dir}.feedback()) {}

pipeline::SnapshotPtr Service::current() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void Service::publish(pipeline::SnapshotPtr next) {
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

pipeline::SnapshotPtr Service::retrain() {
  std::lock_guard lock(retrain_mutex_);
  const auto old = current();
  auto next = pipeline::rebuild(old->resources, old->version);
  publish(next);
  log::info("retrain: published snapshot " + std::to_string(next->version));
  return next;
}

Response Service::dispatch(std::string_view method, std::string_view path, const QueryParams& query,
                           std::string_view body) {
  const auto snap = current();
  Response response;
  nlohmann::ordered_json out;
  try {
    out = route(*snap, method, path, query, body, response.status);
  } catch (const Error& ex) {
    response.status = http_status(ex.code());
    out = error_body(ex);
  } catch (const std::exception& ex) {
    response.status = 500;
    out = error_body(Error(ErrorCode::kInternal, ex.what()));
  }
  if (!out.contains("snapshot_version")) out["snapshot_version"] = snap->version;
  response.body = out.dump();
  return response;
}

nlohmann::ordered_json Service::route(const pipeline::PipelineSnapshot& snap, std::string_view method,
                                      std::string_view path, const QueryParams& query, std::string_view body,
                                      int& status) {
  const auto parts = split_path(path);
  const auto& view = *snap.corpus;
  const auto& config = snap.resources->config;
  nlohmann::ordered_json j;
  j["snapshot_version"] = snap.version;

  if (method == "GET") {
    if (parts.size() == 1 && parts[0] == "health") {
      j["status"] = "ok";
      return j;
    }
    if (parts.size() == 2 && parts[0] == "stats") {
      const auto topic = param(query, "topic");
      if (parts[1] == "topics") {
        j.update(analytics::to_json(analytics::topic_distribution(view, topic_names(snap))));
        return j;
      }
      if (parts[1] == "entities") {
        const auto n = positive(query, "n", analytics::kDefaultCloudSize);
        j.update(analytics::to_json(analytics::entity_cloud(view, topic, n, topic_names(snap))));
        return j;
      }
      if (parts[1] == "timeline") {
        auto g = analytics::Granularity::kDay;
        if (auto text = param(query, "granularity")) {
          auto parsed = analytics::parse_granularity(*text);
          if (!parsed) throw Error(ErrorCode::kInvalidArgument, "granularity must be day, week or month", *text);
          g = *parsed;
        }
        j.update(analytics::to_json(analytics::timeline(view, topic, g, topic_names(snap))));
        return j;
      }
      not_found(path);
    }
    if (parts.size() == 1 && parts[0] == "posts") {
      const auto topic = param(query, "topic");
      if (topic && !snap.resources->lexicon.contains(*topic)) throw Error(ErrorCode::kNotFound, "unknown topic", *topic);
      std::optional<Label> label;
      if (auto text = param(query, "label")) {
        label = parse_label(*text);
        if (!label) throw Error(ErrorCode::kInvalidArgument, "label must be misleading, non-misleading or unlabeled", *text);
      }
      const auto page = positive(query, "page", 1);
      const auto page_size = positive(query, "page_size", 20);
      if (page_size > 500) throw Error(ErrorCode::kInvalidArgument, "page_size is at most 500");
      std::vector<const AnnotatedPost*> matches;
      for (const auto& p : view.posts()) {
        if (label && p.label != *label) continue;
        if (topic && (p.annotations ? p.annotations->topic.name : std::string(kUnknownTopic)) != *topic) continue;
        matches.push_back(&p);
      }
      auto posts = OrderedJson::array();
      const auto first = (page - 1) * page_size;
      for (std::size_t i = first; i < matches.size() && i < first + page_size; ++i) posts.push_back(post_json(*matches[i]));
      j["total"] = matches.size();
      j["page"] = page;
      j["page_size"] = page_size;
      j["posts"] = std::move(posts);
      return j;
    }
    if (parts.size() >= 2 && parts[0] == "posts") {
      const std::string id(parts[1]);
      const AnnotatedPost* post = view.find(id);
      if (!post) throw Error(ErrorCode::kNotFound, "unknown post", id);
      if (parts.size() == 2) {
        j["post"] = post_json(*post);
        return j;
      }
      if (parts.size() == 3 && parts[2] == "recommendations") {
        recommend::Query q;
        q.post_id = id;
        q.k = positive(query, "k", config.recommend_k);
        q.relaxation = config.relaxation;
        if (auto text = param(query, "target")) {
          auto target = parse_label(*text);
          if (!target || *target == Label::kUnlabeled) {
            throw Error(ErrorCode::kInvalidArgument, "target must be misleading or non-misleading", *text);
          }
          q.target = *target;
        }
        if (auto text = param(query, "relaxation")) {
          auto r = recommend::parse_relaxation(*text);
          if (!r) throw Error(ErrorCode::kInvalidArgument, "relaxation must be strict, entity-drop or sentiment-drop", *text);
          q.relaxation = *r;
        }
        j["post_id"] = id;
        j["target"] = std::string(to_string(q.target));
        j["k"] = q.k;
        j["relaxation"] = std::string(recommend::to_string(q.relaxation));
        j["recommendations"] = recommend::to_json(recommend::recommend(q, view, snap.vectors));
        return j;
      }
    }
    not_found(path);
  }

  if (method == "POST") {
    if (parts.size() == 1 && parts[0] == "feedback") {
      nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
      if (parsed.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "body is not valid JSON");
      auto record = feedback::validate_submission(parsed, view, topic_names(snap), timeutil::now());
      record = log_.append(std::move(record));
      status = 201;
      j["feedback"] = feedback::to_json(record);
      j["note"] = "takes effect at the next retrain";
      return j;
    }
    if (parts.size() == 1 && parts[0] == "analyze") {
      nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
      if (parsed.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "body is not valid JSON");
      if (!parsed.is_object() || !parsed.contains("text") || !parsed["text"].is_string()) {
        throw Error(ErrorCode::kValidation, "body must be {\"text\": string}");
      }
      j["analysis"] = pipeline::analyze_text(parsed["text"].get<std::string>(), snap);
      return j;
    }
    if (parts.size() == 2 && parts[0] == "admin" && parts[1] == "retrain") {
      const auto next = retrain();
      j["snapshot_version"] = next->version;
      j["previous_version"] = snap.version;
      j["posts"] = next->corpus->size();
      return j;
    }
  }
  not_found(path);
}

}  // namespace concierge::service
