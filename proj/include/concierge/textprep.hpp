#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace concierge::textprep {

struct PrepOptions {
  bool url_strip = true;
  bool mention_strip = true;
  bool keep_hashtags = true;
};

// Canonical token stream shared by every model. Per-token flags are
// parallel to `tokens`.
struct TokenizedText {
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<std::string> hashtags;
  std::vector<bool> all_caps;    // token was written in capitals ("HELLO")
  std::vector<bool> currency;    // token was prefixed by $, €, £ or ¥
  std::size_t exclamations = 0;
  std::size_t questions = 0;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

TokenizedText tokenize(std::string_view raw, const PrepOptions& options = {});

// Contiguous n-grams joined by single spaces; empty when n exceeds the
// token count.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t n);

std::string nfc_lower(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

inline bool is_hashtag(std::string_view token) {
  return token.size() > 1 && token.front() == '#';
}

inline std::string_view strip_hash(std::string_view token) {
  return is_hashtag(token) ? token.substr(1) : token;
}

}  // namespace concierge::textprep
