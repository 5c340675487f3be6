#include "concierge/embedding_index.hpp"

#include "concierge/errors.hpp"
#include "concierge/log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

namespace concierge::embeddings {

namespace {

bool better(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.id < b.id;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

const float* EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dim_;
}

bool EmbeddingTable::add(std::string token, std::span<const float> values) {
  if (values.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument, "vector dimension mismatch", token);
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite vector component", token);
  }
  if (index_.count(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

EmbeddingTable EmbeddingTable::with_dim(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  EmbeddingTable t;
  t.dim_ = dim;
  return t;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read embeddings", path.string());
  return load_embeddings(in, expected_dim, path.string());
}

EmbeddingTable load_embeddings(std::istream& in, std::size_t expected_dim, const std::string& origin) {
  EmbeddingTable table;
  table.dim_ = expected_dim;
  std::string line;
  std::vector<float> values;
  std::size_t duplicates = 0;
  while (std::getline(in, line)) {
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      ++table.skipped_;
      continue;
    }
    const std::size_t arity = fields.size() - 1;
    if (table.dim_ == 0) table.dim_ = arity;
    if (arity != table.dim_) {
      ++table.skipped_;
      continue;
    }
    values.clear();
    bool ok = true;
    for (std::size_t i = 1; i < fields.size() && ok; ++i) {
      float v = 0.0f;
      auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      ok = ec == std::errc{} && ptr == fields[i].data() + fields[i].size() && std::isfinite(v);
      values.push_back(v);
    }
    if (!ok) {
      ++table.skipped_;
      continue;
    }
    if (!table.add(std::string(fields[0]), values)) ++duplicates;
  }
  if (table.empty()) throw Error(ErrorCode::kValidation, "no valid embedding lines", origin);
  if (expected_dim != 0 && table.dim_ != expected_dim) {
    throw Error(ErrorCode::kValidation, "embedding dimension mismatch", origin);
  }
  if (table.skipped_ > 0) {
    log::warn("embeddings: skipped " + std::to_string(table.skipped_) + " malformed lines in " + origin);
  }
  if (duplicates > 0) {
    log::info("embeddings: ignored " + std::to_string(duplicates) + " duplicate tokens in " + origin);
  }
  return table;
}

PostVector embed_post(std::string id, const textprep::TokenizedText& text, const EmbeddingTable& table) {
  PostVector out;
  out.id = std::move(id);
  out.values.assign(table.dim(), 0.0);
  if (text.tokens.empty()) return out;
  std::size_t hits = 0;
  for (const auto& token : text.tokens) {
    const float* v = table.find(token);
    if (!v && textprep::is_hashtag(token)) v = table.find(textprep::strip_hash(token));
    if (!v) continue;
    ++hits;
    for (std::size_t i = 0; i < table.dim(); ++i) out.values[i] += static_cast<double>(v[i]);
  }
  if (hits > 0) {
    for (auto& x : out.values) x /= static_cast<double>(hits);
  }
  out.coverage = static_cast<double>(hits) / static_cast<double>(text.tokens.size());
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with different sizes");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<Neighbor> top_k(const PostVector& query, const std::vector<const PostVector*>& candidates, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  // Worst kept element on top.
  std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(&better)> heap(&better);
  for (const PostVector* c : candidates) {
    if (!c || c->coverage <= 0.0) continue;
    Neighbor n{c->id, cosine(query.values, c->values)};
    if (heap.size() < k) {
      heap.push(std::move(n));
    } else if (better(n, heap.top())) {
      heap.pop();
      heap.push(std::move(n));
    }
  }
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void VectorIndex::insert(PostVector v) {
  auto id = v.id;
  vectors_.insert_or_assign(std::move(id), std::move(v));
}

const PostVector* VectorIndex::find(std::string_view id) const {
  auto it = vectors_.find(std::string(id));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<Neighbor> VectorIndex::top_k(const PostVector& query, const std::vector<std::string>& candidate_ids,
                                         std::size_t k) const {
  std::vector<const PostVector*> candidates;
  candidates.reserve(candidate_ids.size());
  for (const auto& id : candidate_ids) {
    if (const auto* v = find(id)) candidates.push_back(v);
  }
  return embeddings::top_k(query, candidates, k);
}

}  // namespace concierge::embeddings
