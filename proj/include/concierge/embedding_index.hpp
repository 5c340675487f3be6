#pragma once

#include "concierge/textprep.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace concierge::embeddings {

// Word vectors in GloVe text layout. Immutable once loaded.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t skipped() const { return skipped_; }
  bool empty() const { return tokens_.empty(); }

  // Null when the token is out of vocabulary.
  const float* find(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Adds a vector; returns false when the token is already present.
  bool add(std::string token, std::span<const float> values);

  static EmbeddingTable with_dim(std::size_t dim);

 private:
  friend EmbeddingTable load_embeddings(std::istream&, std::size_t, const std::string&);

  std::size_t dim_ = 0;
  std::size_t skipped_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

// expected_dim == 0 takes the dimension of the first valid line. Lines whose
// arity disagrees are skipped; throws Error(kValidation) on zero valid
// lines or when the file's dimension differs from expected_dim.
EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim = 0);
EmbeddingTable load_embeddings(std::istream& in, std::size_t expected_dim = 0, const std::string& origin = "<stream>");

struct PostVector {
  std::string id;
  std::vector<double> values;
  double coverage = 0.0;  // in-vocabulary tokens / tokens
};

// Mean of in-vocabulary token vectors; hashtags are tried with '#' removed.
PostVector embed_post(std::string id, const textprep::TokenizedText& text, const EmbeddingTable& table);

// a.b / (|a||b|), 0 when either norm is 0.
double cosine(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::string id;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Exact top-k by cosine descending, ties by id ascending. Zero-coverage
// candidates never rank. Throws Error(kInvalidArgument) when k == 0.
std::vector<Neighbor> top_k(const PostVector& query, const std::vector<const PostVector*>& candidates, std::size_t k);

// Post vectors keyed by id.
class VectorIndex {
 public:
  void insert(PostVector v);
  const PostVector* find(std::string_view id) const;
  std::size_t size() const { return vectors_.size(); }

  // Ids missing from the index are ignored.
  std::vector<Neighbor> top_k(const PostVector& query, const std::vector<std::string>& candidate_ids,
                              std::size_t k) const;

 private:
  std::unordered_map<std::string, PostVector> vectors_;
};

}  // namespace concierge::embeddings
