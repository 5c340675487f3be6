#include "concierge/corpus_store.hpp"

#include "concierge/errors.hpp"
#include "concierge/json_codec.hpp"
#include "concierge/textprep.hpp"
#include "concierge/timeutil.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace concierge::corpus {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parse outcome for a single record; `reason` set on rejection.
struct Parsed {
  std::optional<AnnotatedPost> post;
  std::string reason;
};

Parsed reject(std::string reason) { return Parsed{std::nullopt, std::move(reason)}; }

std::optional<Label> parse_label_cell(std::string_view text, bool& ok) {
  ok = true;
  text = trim(text);
  if (text.empty() || text == "null") return std::nullopt;
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "misleading") return Label::kMisleading;
  if (lower == "non-misleading") return Label::kNonMisleading;
  ok = false;
  return std::nullopt;
}

Parsed build(std::string id, std::string text, std::optional<Timestamp> ts, std::string_view label_text,
             bool label_present, std::string source) {
  if (trim(id).empty()) return reject("missing id");
  if (trim(text).empty()) return reject("empty text");
  if (!ts) return reject("bad timestamp");
  AnnotatedPost p;
  p.post = RawPost{std::move(id), std::move(text), *ts, std::move(source)};
  if (label_present) {
    bool ok = false;
    auto label = parse_label_cell(label_text, ok);
    if (!ok) return reject("bad label");
    if (label) {
      p.label = *label;
      p.label_source = LabelSource::kHuman;
      p.label_confidence = 1.0;
    }
  }
  return Parsed{std::move(p), {}};
}

Parsed parse_json_record(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error&) {
    return reject("malformed json");
  }
  if (!j.is_object()) return reject("record is not an object");
  if (!j.contains("id") || !j["id"].is_string()) return reject("missing id");
  if (!j.contains("text") || !j["text"].is_string()) return reject("empty text");

  std::optional<Timestamp> ts;
  if (j.contains("timestamp")) {
    const auto& t = j["timestamp"];
    if (t.is_number_integer()) ts = t.get<Timestamp>();
    else if (t.is_string()) ts = timeutil::parse(t.get<std::string>());
  }

  std::string label_text;
  bool label_present = false;
  if (j.contains("label") && !j["label"].is_null()) {
    if (!j["label"].is_string()) return reject("bad label");
    label_text = j["label"].get<std::string>();
    label_present = true;
  }
  std::string source = j.contains("source") && j["source"].is_string() ? j["source"].get<std::string>() : "";

  Parsed parsed = build(j["id"].get<std::string>(), j["text"].get<std::string>(), ts, label_text, label_present,
                        std::move(source));
  if (!parsed.post) return parsed;

  // Fields written by export_jsonl; their presence makes ingest a round trip.
  auto& p = *parsed.post;
  try {
    if (j.contains("label_source")) {
      auto src = parse_label_source(j["label_source"].get<std::string>());
      if (!src) return reject("bad label_source");
      if (p.label == Label::kUnlabeled && *src != LabelSource::kNone) return reject("label_source without label");
      if (p.label != Label::kUnlabeled) p.label_source = *src;
    }
    if (j.contains("label_confidence") && p.label != Label::kUnlabeled) {
      p.label_confidence = j["label_confidence"].get<double>();
      if (!(p.label_confidence >= 0.0 && p.label_confidence <= 1.0)) return reject("bad label_confidence");
      if (p.human_labeled() && p.label_confidence != 1.0) return reject("human label must have confidence 1");
    }
    if (j.contains("annotations") && !j["annotations"].is_null()) {
      p.annotations = annotations_from_json(j["annotations"]);
    }
  } catch (const Error& e) {
    return reject(std::string("bad annotations: ") + e.what());
  } catch (const Json::exception& e) {
    return reject(std::string("bad annotations: ") + e.what());
  }
  return parsed;
}

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no,
                     bool& unterminated) {
  fields.clear();
  unterminated = false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else if (c == '\n') {
      ++line_no;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  unterminated = in_quotes;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

std::optional<Format> parse_format(std::string_view text) {
  if (text == "jsonl") return Format::kJsonl;
  if (text == "csv") return Format::kCsv;
  return std::nullopt;
}

CorpusView::CorpusView(std::vector<AnnotatedPost> posts, std::uint64_t version)
    : posts_(std::move(posts)), version_(version) {
  index_.reserve(posts_.size());
  for (std::size_t i = 0; i < posts_.size(); ++i) index_.emplace(posts_[i].post.id, i);
}

const AnnotatedPost* CorpusView::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &posts_[it->second];
}

CorpusStats CorpusView::stats() const { return compute_stats(posts_); }

CorpusStats compute_stats(const std::vector<AnnotatedPost>& posts) {
  CorpusStats s;
  s.total = posts.size();
  for (const auto& p : posts) {
    ++s.per_label[p.label];
    ++s.per_topic[p.annotations ? p.annotations->topic.name : std::string(kUnknownTopic)];
    const Timestamp ts = p.post.timestamp;
    if (!s.time_range) {
      s.time_range = std::make_pair(ts, ts);
    } else {
      s.time_range->first = std::min(s.time_range->first, ts);
      s.time_range->second = std::max(s.time_range->second, ts);
    }
  }
  return s;
}

CorpusStore::CorpusStore(AcceptPredicate accept)
    : accept_(std::move(accept)), current_(std::make_shared<const CorpusView>()) {}

IngestReport CorpusStore::ingest(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read input file", path.string());
  return ingest(in, format);
}

IngestReport CorpusStore::ingest(std::istream& in, Format format) {
  std::vector<std::pair<std::size_t, Parsed>> records;

  if (format == Format::kJsonl) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      records.emplace_back(line_no, parse_json_record(line));
    }
  } else {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    bool unterminated = false;
    if (read_csv_record(in, fields, line_no, unterminated)) {
      std::map<std::string, std::size_t> columns;
      for (std::size_t i = 0; i < fields.size(); ++i) columns[std::string(trim(fields[i]))] = i;
      for (const char* required : {"id", "text", "timestamp"}) {
        if (!columns.count(required)) {
          throw Error(ErrorCode::kValidation, std::string("csv header lacks column '") + required + "'");
        }
      }
      auto cell = [&](const char* name, bool& present) -> std::string {
        auto it = columns.find(name);
        present = it != columns.end() && it->second < fields.size();
        return present ? fields[it->second] : std::string();
      };
      while (true) {
        const std::size_t start_line = line_no + 1;
        if (!read_csv_record(in, fields, line_no, unterminated)) break;
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;
        if (unterminated) {
          records.emplace_back(start_line, reject("unterminated quote"));
          break;
        }
        if (fields.size() != columns.size()) {
          records.emplace_back(start_line, reject("wrong column count"));
          continue;
        }
        bool present = false;
        std::string id = cell("id", present);
        std::string text = cell("text", present);
        auto ts = timeutil::parse(trim(cell("timestamp", present)));
        bool label_present = false;
        std::string label = cell("label", label_present);
        bool source_present = false;
        std::string source = cell("source", source_present);
        records.emplace_back(start_line, build(std::move(id), std::move(text), ts, label, label_present,
                                               std::move(source)));
      }
    }
  }

  std::lock_guard lock(mutex_);
  std::vector<AnnotatedPost> posts = current_->posts();
  std::unordered_set<std::string> seen;
  seen.reserve(posts.size() + records.size());
  for (const auto& p : posts) seen.insert(p.post.id);

  IngestReport report;
  for (auto& [line, parsed] : records) {
    if (!parsed.post) {
      report.rejects.push_back({line, parsed.reason});
      continue;
    }
    if (accept_ && !accept_(parsed.post->post)) {
      report.rejects.push_back({line, "filtered"});
      continue;
    }
    if (!seen.insert(parsed.post->post.id).second) {
      report.rejects.push_back({line, "duplicate id"});
      continue;
    }
    posts.push_back(std::move(*parsed.post));
    ++report.accepted;
  }
  const auto version = current_->version() + (report.accepted ? 1 : 0);
  current_ = std::make_shared<const CorpusView>(std::move(posts), version);
  report.stats = current_->stats();
  return report;
}

void CorpusStore::update(std::vector<AnnotatedPost> updated) {
  std::lock_guard lock(mutex_);
  std::vector<AnnotatedPost> posts = current_->posts();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < posts.size(); ++i) index.emplace(posts[i].post.id, i);
  for (auto& p : updated) {
    auto it = index.find(p.post.id);
    if (it == index.end()) throw Error(ErrorCode::kNotFound, "update of unknown post", p.post.id);
    posts[it->second] = std::move(p);
  }
  current_ = std::make_shared<const CorpusView>(std::move(posts), current_->version() + 1);
}

CorpusStore::CorpusStore(CorpusStore&& other) noexcept : accept_(std::move(other.accept_)) {
  std::lock_guard lock(other.mutex_);
  current_ = std::move(other.current_);
  other.current_ = std::make_shared<const CorpusView>();
}

Snapshot CorpusStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return current_;
}

CorpusStore CorpusStore::load(const std::filesystem::path& path) {
  CorpusStore store;
  if (!std::filesystem::exists(path)) return store;
  auto report = store.ingest(path, Format::kJsonl);
  if (!report.rejects.empty()) {
    throw Error(ErrorCode::kValidation, "corrupt store file",
                path.string() + ":" + std::to_string(report.rejects.front().line) + ": " +
                    report.rejects.front().reason);
  }
  return store;
}

void CorpusStore::save(const std::filesystem::path& path) const {
  const auto snap = snapshot();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write store", tmp.string());
    export_jsonl(*snap, out);
    if (!out) throw Error(ErrorCode::kIo, "short write", tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void export_jsonl(const CorpusView& view, std::ostream& out) {
  for (const auto& p : view.posts()) {
    out << OrderedJson(p).dump() << '\n';
  }
}

void write_rejects(const std::vector<Reject>& rejects, std::ostream& out) {
  for (const auto& r : rejects) out << OrderedJson{{"line", r.line}, {"reason", r.reason}}.dump() << '\n';
}

std::string_view to_string(Relevance r) {
  switch (r) {
    case Relevance::kMultiMatch: return "multi";
    case Relevance::kSingleMatch: return "single";
    case Relevance::kNoMatch: return "none";
  }
  return "none";
}

Relevance relevance_filter(const RawPost& post, const std::vector<std::string>& keywords) {
  const auto t = textprep::tokenize(post.text);
  std::set<std::string> grams;
  for (const auto& tok : t.tokens) grams.emplace(textprep::strip_hash(tok));
  for (std::size_t n = 2; n <= 3; ++n) {
    for (auto& g : textprep::ngrams(t.tokens, n)) grams.insert(std::move(g));
  }
  std::set<std::string_view> hit;
  for (const auto& k : keywords) {
    if (grams.count(k)) hit.insert(k);
  }
  if (hit.empty()) return Relevance::kNoMatch;
  return hit.size() == 1 ? Relevance::kSingleMatch : Relevance::kMultiMatch;
}

}  // namespace concierge::corpus
