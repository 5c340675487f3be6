#include "concierge/sentiment.hpp"

#include "concierge/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace concierge::sentiment {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read sentiment resource", path.string());
  return in;
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

SentimentLexicon::SentimentLexicon(std::unordered_map<std::string, double> valences,
                                   std::unordered_map<std::string, double> boosters,
                                   std::unordered_set<std::string> negations)
    : valences_(std::move(valences)), boosters_(std::move(boosters)), negations_(std::move(negations)) {
  for (const auto& [token, v] : valences_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kValidation, "non-finite valence", token);
  }
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& lexicon, const std::filesystem::path& boosters,
                                        const std::filesystem::path& negations) {
  std::unordered_map<std::string, double> valences;
  std::unordered_map<std::string, double> boost;
  std::unordered_set<std::string> neg;
  std::string line;
  std::size_t line_no = 0;

  auto in = open(lexicon);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kValidation, "lexicon line lacks a tab", lexicon.string() + ":" + std::to_string(line_no));
    }
    const auto rest = std::string_view(line).substr(tab + 1);
    auto v = parse_double(rest.substr(0, rest.find('\t')));
    if (!v) throw Error(ErrorCode::kValidation, "bad valence", lexicon.string() + ":" + std::to_string(line_no));
    valences.emplace(line.substr(0, tab), *v);
  }

  auto bin = open(boosters);
  line_no = 0;
  while (std::getline(bin, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    double delta = Constants{}.booster_increment;
    if (tab != std::string::npos) {
      auto v = parse_double(std::string_view(line).substr(tab + 1));
      if (!v) throw Error(ErrorCode::kValidation, "bad booster delta", boosters.string() + ":" + std::to_string(line_no));
      delta = *v;
    }
    boost.emplace(std::string(trim(std::string_view(line).substr(0, tab))), delta);
  }

  auto nin = open(negations);
  while (std::getline(nin, line)) {
    if (!trim(line).empty()) neg.emplace(trim(line));
  }
  return SentimentLexicon(std::move(valences), std::move(boost), std::move(neg));
}

std::optional<double> SentimentLexicon::valence(std::string_view token) const {
  auto it = valences_.find(std::string(token));
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SentimentLexicon::booster(std::string_view token) const {
  auto it = boosters_.find(std::string(token));
  if (it == boosters_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negation(std::string_view token) const {
  return negations_.count(std::string(token)) > 0 || token.find("n't") != std::string_view::npos;
}

double normalize(double raw, double alpha) {
  const double n = raw / std::sqrt(raw * raw + alpha);
  return std::clamp(n, -1.0, 1.0);
}

SentimentClass classify(double compound, const Constants& c) {
  if (compound >= c.positive_threshold) return SentimentClass::kPositive;
  if (compound <= c.negative_threshold) return SentimentClass::kNegative;
  return SentimentClass::kNeutral;
}

SentimentScore score(const textprep::TokenizedText& text, const SentimentLexicon& lexicon, const Constants& c) {
  SentimentScore result;
  const auto& tokens = text.tokens;
  const std::size_t n = tokens.size();
  if (n == 0) return result;

  // Emphasis from capitals only counts when the post mixes cases.
  std::size_t caps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < text.all_caps.size() && text.all_caps[i]) ++caps;
  }
  const bool cap_differential = caps > 0 && caps < n;
  auto is_caps = [&](std::size_t i) { return cap_differential && i < text.all_caps.size() && text.all_caps[i]; };

  std::vector<double> valences(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string_view token = textprep::strip_hash(tokens[i]);
    if (lexicon.booster(token)) continue;
    auto base = lexicon.valence(token);
    if (!base) continue;
    double v = *base;
    if (is_caps(i)) v += sign(v) * c.caps_increment;

    for (std::size_t dist = 1; dist <= c.window && dist <= i; ++dist) {
      const std::string_view before = textprep::strip_hash(tokens[i - dist]);
      if (auto delta = lexicon.booster(before)) {
        double s = *delta * (v < 0 ? -1.0 : 1.0);
        if (is_caps(i - dist)) s += sign(v) * c.caps_increment;
        if (dist == 2) s *= 0.95;
        if (dist == 3) s *= 0.9;
        v += s;
      }
      if (lexicon.is_negation(before)) v *= c.negation_scalar;
    }
    valences[i] = v;
  }

  if (auto but = std::find(tokens.begin(), tokens.end(), "but"); but != tokens.end()) {
    const auto at = static_cast<std::size_t>(but - tokens.begin());
    for (std::size_t i = 0; i < n; ++i) {
      if (i < at) valences[i] *= c.before_but;
      else if (i > at) valences[i] *= c.after_but;
    }
  }

  double sum = 0.0;
  double pos_sum = 0.0, neg_sum = 0.0, neutral = 0.0;
  for (double v : valences) {
    sum += v;
    if (v > 0) pos_sum += v + 1.0;
    else if (v < 0) neg_sum += v - 1.0;
    else neutral += 1.0;
  }

  double emphasis = static_cast<double>(std::min(text.exclamations, c.max_exclamations)) * c.exclamation_increment;
  if (text.questions > 1) {
    emphasis += text.questions <= 3 ? static_cast<double>(text.questions) * c.question_increment : c.question_cap;
  }
  if (sum > 0) sum += emphasis;
  else if (sum < 0) sum -= emphasis;

  if (pos_sum > std::abs(neg_sum)) pos_sum += emphasis;
  else if (pos_sum < std::abs(neg_sum)) neg_sum -= emphasis;

  result.compound = sum == 0.0 ? 0.0 : normalize(sum, c.normalization_alpha);
  const double total = pos_sum + std::abs(neg_sum) + neutral;
  if (total > 0.0) {
    result.pos = pos_sum / total;
    result.neg = std::abs(neg_sum) / total;
    result.neu = neutral / total;
  }
  result.cls = classify(result.compound, c);
  return result;
}

}  // namespace concierge::sentiment
