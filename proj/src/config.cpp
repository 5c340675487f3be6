#include "concierge/config.hpp"

#include "concierge/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace concierge {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

template <typename T>
T number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kValidation, "config value is not a number", key + " = " + value);
  }
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::kValidation, "config value is not a boolean", key + " = " + value);
}

void use_data_dir(Config& c, const std::filesystem::path& data) {
  c.lexicon_path = data / "lexicon" / "topics.json";
  c.gazetteer_paths = {data / "gazetteer" / "general.json", data / "gazetteer" / "vac_seed.json",
                       data / "gazetteer" / "vaccines.json"};
  c.sentiment_lexicon = data / "sentiment" / "lexicon.tsv";
  c.sentiment_boosters = data / "sentiment" / "boosters.txt";
  c.sentiment_negations = data / "sentiment" / "negations.txt";
  c.embeddings_path = data / "embeddings" / "fixture.50d.txt";
}

}  // namespace

Config Config::defaults(const std::filesystem::path& base_dir) {
  Config c;
  c.state_dir = base_dir / "state";
  use_data_dir(c, base_dir / "data");
  return c;
}

Config Config::parse(std::string_view text, const std::filesystem::path& base_dir) {
  Config c = defaults(base_dir);
  auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
      {"state_dir", [&](auto&, auto& v) { c.state_dir = path(v); }},
      {"data_dir", [&](auto&, auto& v) { use_data_dir(c, path(v)); }},
      {"lexicon.path", [&](auto&, auto& v) { c.lexicon_path = path(v); }},
      {"gazetteer.paths",
       [&](auto&, auto& v) {
         c.gazetteer_paths.clear();
         for (const auto& p : split_list(v)) c.gazetteer_paths.push_back(path(p));
       }},
      {"entities.labeled", [&](auto&, auto& v) { c.labeled_entities = v.empty() ? std::filesystem::path() : path(v); }},
      {"sentiment.lexicon", [&](auto&, auto& v) { c.sentiment_lexicon = path(v); }},
      {"sentiment.boosters", [&](auto&, auto& v) { c.sentiment_boosters = path(v); }},
      {"sentiment.negations", [&](auto&, auto& v) { c.sentiment_negations = path(v); }},
      {"embeddings.path", [&](auto&, auto& v) { c.embeddings_path = path(v); }},
      {"embeddings.dim", [&](auto& k, auto& v) { c.embeddings_dim = number<std::size_t>(k, v); }},
      {"service.host", [&](auto&, auto& v) { c.host = v; }},
      {"service.port", [&](auto& k, auto& v) { c.port = number<int>(k, v); }},
      {"recommend.k",
       [&](auto& k, auto& v) {
         c.recommend_k = number<std::size_t>(k, v);
         if (c.recommend_k == 0) throw Error(ErrorCode::kValidation, "recommend.k must be at least 1");
       }},
      {"recommend.relaxation",
       [&](auto& k, auto& v) {
         auto r = recommend::parse_relaxation(v);
         if (!r) throw Error(ErrorCode::kValidation, "unknown relaxation", k + " = " + v);
         c.relaxation = *r;
       }},
      {"classifier.tau", [&](auto& k, auto& v) { c.classifier.tau = number<double>(k, v); }},
      {"classifier.max_rounds", [&](auto& k, auto& v) { c.classifier.max_rounds = number<int>(k, v); }},
      {"classifier.batch_cap_fraction",
       [&](auto& k, auto& v) { c.classifier.batch_cap_fraction = number<double>(k, v); }},
      {"classifier.batch_cap", [&](auto& k, auto& v) { c.classifier.batch_cap = number<std::size_t>(k, v); }},
      {"classifier.l2", [&](auto& k, auto& v) { c.classifier.train.l2 = number<double>(k, v); }},
      {"classifier.learning_rate", [&](auto& k, auto& v) { c.classifier.train.learning_rate = number<double>(k, v); }},
      {"classifier.epochs", [&](auto& k, auto& v) { c.classifier.train.max_epochs = number<int>(k, v); }},
      {"lda.enabled", [&](auto& k, auto& v) { c.lda_enabled = boolean(k, v); }},
      {"lda.topics", [&](auto& k, auto& v) { c.lda.topics = number<std::size_t>(k, v); }},
      {"lda.alpha", [&](auto& k, auto& v) { c.lda.alpha = number<double>(k, v); }},
      {"lda.beta", [&](auto& k, auto& v) { c.lda.beta = number<double>(k, v); }},
      {"lda.iterations", [&](auto& k, auto& v) { c.lda.iterations = number<int>(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.set_seed(number<std::uint64_t>(k, v)); }},
      {"prep.url_strip", [&](auto& k, auto& v) { c.prep.url_strip = boolean(k, v); }},
      {"prep.mention_strip", [&](auto& k, auto& v) { c.prep.mention_strip = boolean(k, v); }},
      {"prep.keep_hashtags", [&](auto& k, auto& v) { c.prep.keep_hashtags = boolean(k, v); }},
      {"relevance.keywords", [&](auto&, auto& v) { c.relevance_keywords = split_list(v); }},
      {"ner.fuzzy", [&](auto& k, auto& v) { c.ner.enabled = boolean(k, v); }},
      {"ner.max_edit", [&](auto& k, auto& v) { c.ner.max_edit = number<std::size_t>(k, v); }},
      {"ner.min_len", [&](auto& k, auto& v) { c.ner.min_len = number<std::size_t>(k, v); }},
      {"ner.affix_min_len", [&](auto& k, auto& v) { c.ner.affix_min_len = number<std::size_t>(k, v); }},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kValidation, "config line is not key = value", "line " + std::to_string(line_no));
    }
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::kValidation, "unknown config key", key);
    it->second(key, value);
  }
  c.classifier.validate();
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config", path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return parse(ss.str(), base);
}

Config Config::resolve(const std::filesystem::path& explicit_path) {
  if (!explicit_path.empty()) return load(explicit_path);
  if (const char* env = std::getenv("CONCIERGE_CONFIG"); env && *env) return load(env);
  if (std::filesystem::exists("concierge.conf")) return load("concierge.conf");
  return defaults(std::filesystem::current_path());
}

}  // namespace concierge
