#pragma once

#include "concierge/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace concierge::corpus {

enum class Format { kJsonl, kCsv };

std::optional<Format> parse_format(std::string_view text);

struct CorpusStats {
  std::size_t total = 0;
  std::map<Label, std::size_t> per_label;
  std::map<std::string, std::size_t> per_topic;  // unannotated posts count as Unknown
  std::optional<std::pair<Timestamp, Timestamp>> time_range;

  bool operator==(const CorpusStats&) const = default;
};

struct Reject {
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  CorpusStats stats;  // state of the store after the batch
  std::size_t accepted = 0;
  std::vector<Reject> rejects;
};

// Read-only, point-in-time view. Safe to share across threads.
class CorpusView {
 public:
  CorpusView() = default;
  CorpusView(std::vector<AnnotatedPost> posts, std::uint64_t version);

  const std::vector<AnnotatedPost>& posts() const { return posts_; }
  const AnnotatedPost* find(std::string_view id) const;
  std::size_t size() const { return posts_.size(); }
  std::uint64_t version() const { return version_; }
  CorpusStats stats() const;

 private:
  std::vector<AnnotatedPost> posts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t version_ = 0;
};

using Snapshot = std::shared_ptr<const CorpusView>;

// Non-English filtering hook; returning false rejects the record.
using AcceptPredicate = std::function<bool(const RawPost&)>;

// Single writer, many readers: every write publishes a fresh immutable view.
class CorpusStore {
 public:
  explicit CorpusStore(AcceptPredicate accept = {});
  CorpusStore(CorpusStore&& other) noexcept;
  CorpusStore& operator=(CorpusStore&&) = delete;

  IngestReport ingest(const std::filesystem::path& path, Format format);
  IngestReport ingest(std::istream& in, Format format);

  // Replaces post annotations wholesale (ids must already exist).
  void update(std::vector<AnnotatedPost> posts);

  Snapshot snapshot() const;

  static CorpusStore load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  AcceptPredicate accept_;
  mutable std::mutex mutex_;
  Snapshot current_;
};

CorpusStats compute_stats(const std::vector<AnnotatedPost>& posts);

// One AnnotatedPost per line, in store order.
void export_jsonl(const CorpusView& view, std::ostream& out);
void write_rejects(const std::vector<Reject>& rejects, std::ostream& out);

enum class Relevance { kMultiMatch, kSingleMatch, kNoMatch };

std::string_view to_string(Relevance r);

// Counts distinct keywords present among the post's normalized tokens
// (hashtags match with '#' removed; multi-word keywords match n-grams).
Relevance relevance_filter(const RawPost& post, const std::vector<std::string>& keywords);

}  // namespace concierge::corpus
