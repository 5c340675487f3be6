#include "concierge/textprep.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cctype>
#include <stdexcept>

namespace concierge::textprep {

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_url(std::string_view chunk) {
  return starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
         starts_with_ci(chunk, "www.");
}

struct CodePoint {
  UChar32 cp;
  std::string_view bytes;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, s.substr(static_cast<std::size_t>(start),
                               static_cast<std::size_t>(i - start))});
  }
  return out;
}

bool is_word_char(UChar32 c) { return u_isalnum(c) || u_hasBinaryProperty(c, UCHAR_ALPHABETIC); }

bool is_currency(UChar32 c) { return u_charType(c) == U_CURRENCY_SYMBOL; }

// Splits one whitespace-delimited chunk into word pieces. '#' survives only
// as the first character of a piece; apostrophes survive only between two
// word characters.
struct Piece {
  std::string text;  // original case
  bool hashtag = false;
  bool currency = false;
};

std::vector<Piece> split_chunk(std::string_view chunk) {
  std::vector<Piece> pieces;
  const auto cps = decode(chunk);
  Piece current;
  bool pending_hash = false;
  bool pending_currency = false;

  auto flush = [&] {
    if (!current.text.empty()) pieces.push_back(std::move(current));
    current = Piece{};
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const UChar32 c = cps[i].cp;
    if (is_word_char(c)) {
      if (current.text.empty()) {
        current.hashtag = pending_hash;
        current.currency = pending_currency;
        pending_hash = false;
        pending_currency = false;
      }
      current.text.append(cps[i].bytes);
      continue;
    }
    const bool has_next_word = i + 1 < cps.size() && is_word_char(cps[i + 1].cp);
    if ((c == '\'' || c == 0x2019) && !current.text.empty() && has_next_word) {
      current.text.push_back('\'');
      continue;
    }
    // 1,000 and 2.5 stay single tokens
    if ((c == '.' || c == ',') && !current.text.empty() && has_next_word &&
        u_isdigit(cps[i + 1].cp) && std::isdigit(static_cast<unsigned char>(current.text.back()))) {
      current.text.push_back(static_cast<char>(c));
      continue;
    }
    flush();
    if (c == '#') {
      pending_hash = true;
    } else if (is_currency(c)) {
      pending_currency = true;
      pending_hash = false;
    } else {
      pending_hash = false;
      pending_currency = false;
    }
  }
  flush();
  return pieces;
}

bool all_caps(std::string_view word) {
  int letters = 0;
  for (const auto& cp : decode(word)) {
    if (u_isalpha(cp.cp)) {
      if (!u_isupper(cp.cp)) return false;
      ++letters;
    }
  }
  return letters >= 2;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

std::string normalize_nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString normalized = nfc().normalize(src, status);
  if (U_FAILURE(status)) return std::string(s);
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string lower(std::string_view s) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

}  // namespace

std::string nfc_lower(std::string_view text) { return lower(normalize_nfc(text)); }

TokenizedText tokenize(std::string_view raw, const PrepOptions& options) {
  TokenizedText out;
  out.raw = std::string(raw);
  const std::string text = normalize_nfc(raw);

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) break;
    std::string_view chunk(text.data() + pos, end - pos);
    pos = end;

    if (options.url_strip && is_url(chunk)) continue;
    if (options.mention_strip && chunk.front() == '@') {
      // "@handle:" or "@handle's" are still mentions; keep anything after the handle
      std::size_t i = 1;
      while (i < chunk.size() && (std::isalnum(static_cast<unsigned char>(chunk[i])) || chunk[i] == '_')) ++i;
      chunk.remove_prefix(i);
    }
    for (char c : chunk) {
      if (c == '!') ++out.exclamations;
      else if (c == '?') ++out.questions;
    }

    for (auto& piece : split_chunk(chunk)) {
      std::string token = lower(piece.text);
      const bool hashtag = piece.hashtag && options.keep_hashtags;
      if (hashtag) token.insert(token.begin(), '#');
      if (hashtag) out.hashtags.push_back(token);
      out.all_caps.push_back(all_caps(piece.text));
      out.currency.push_back(piece.currency);
      out.tokens.push_back(std::move(token));
    }
  }
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  if (n == 0) throw std::invalid_argument("ngram size must be at least 1");
  std::vector<std::string> out;
  if (n > tokens.size()) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      g.push_back(' ');
      g += tokens[i + j];
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace concierge::textprep
