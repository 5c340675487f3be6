#include "concierge/entity_recognizer.hpp"

#include "concierge/errors.hpp"
#include "concierge/log.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace concierge::entities {

std::string normalize_surface(std::string_view surface) {
  std::string out;
  bool pending_space = false;
  for (char c : surface) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

}  // namespace

class GazetteerBuilder {
 public:
  enum class Policy { kMergeFiles, kOverride };

  explicit GazetteerBuilder(Gazetteer base = {}) : g_(std::move(base)) {}

  void add(const std::string& raw_surface, EntityType type, Policy policy) {
    const std::string surface = normalize_surface(raw_surface);
    if (surface.empty()) throw Error(ErrorCode::kValidation, "empty gazetteer surface");
    const std::string stripped = strip_spaces(surface);

    if (auto it = g_.surfaces_.find(surface); it != g_.surfaces_.end() && it->second != type) {
      if (!accept(it->second, type, policy, surface)) return;
    }
    // Another surface may own one of our keys ("johnsonandjohnson" vs
    // "johnson and johnson").
    for (const std::string* key : {&surface, &stripped}) {
      auto kit = g_.keys_.find(*key);
      if (kit == g_.keys_.end() || kit->second == surface) continue;
      const EntityType owner = g_.surfaces_.at(kit->second);
      if (owner != type && !accept(owner, type, policy, *key)) return;
    }

    g_.surfaces_[surface] = type;
    g_.keys_[surface] = surface;
    if (stripped == surface) return;
    if (g_.surfaces_.count(stripped)) {
      // the one-word spelling is a surface of its own; same entity, same type
      g_.surfaces_[stripped] = type;
    } else {
      g_.keys_[stripped] = surface;
    }
  }

  Gazetteer build() && { return std::move(g_); }

 private:
  static bool accept(EntityType existing, EntityType incoming, Policy policy, const std::string& surface) {
    if (policy == Policy::kOverride) return true;
    if (existing == EntityType::kVacType && incoming != EntityType::kVacType) {
      log::warn("gazetteer: keeping VAC_TYPE for '" + surface + "' over " + std::string(to_string(incoming)));
      return false;
    }
    log::warn("gazetteer: '" + surface + "' retyped " + std::string(to_string(existing)) + " -> " +
              std::string(to_string(incoming)));
    return true;
  }

  Gazetteer g_;
};

std::optional<Gazetteer::Entry> Gazetteer::lookup(std::string_view key) const {
  std::string k = normalize_surface(key);
  auto it = keys_.find(k);
  if (it == keys_.end()) it = keys_.find(strip_spaces(k));
  if (it == keys_.end()) return std::nullopt;
  return Entry{it->second, surfaces_.at(it->second)};
}

SeedList seed_list_from_json(const std::string& json_text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation, "gazetteer seed file is not valid JSON", origin + ": " + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::kValidation, "gazetteer seed file must be an array", origin);
  SeedList out;
  std::map<std::string, EntityType> seen;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("surface") || !item.contains("type") || !item["surface"].is_string() ||
        !item["type"].is_string()) {
      throw Error(ErrorCode::kValidation, "gazetteer entry needs string surface and type", origin);
    }
    const auto surface = item["surface"].get<std::string>();
    const auto type = parse_entity_type(item["type"].get<std::string>());
    if (!type) throw Error(ErrorCode::kValidation, "unknown entity type", origin + ": " + item["type"].dump());
    auto [it, inserted] = seen.emplace(normalize_surface(surface), *type);
    if (!inserted && it->second != *type) {
      throw Error(ErrorCode::kValidation, "surface maps to two types in one file", origin + ": " + surface);
    }
    out.emplace_back(surface, *type);
  }
  return out;
}

SeedList load_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read gazetteer seed file", path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return seed_list_from_json(ss.str(), path.string());
}

Gazetteer build_gazetteer(const std::vector<SeedList>& files) {
  GazetteerBuilder builder;
  for (const auto& file : files) {
    for (const auto& [surface, type] : file) builder.add(surface, type, GazetteerBuilder::Policy::kMergeFiles);
  }
  return std::move(builder).build();
}

Gazetteer build_gazetteer_from_files(const std::vector<std::filesystem::path>& paths) {
  std::vector<SeedList> files;
  for (const auto& p : paths) files.push_back(load_seed_file(p));
  return build_gazetteer(files);
}

Gazetteer augment(const Gazetteer& gazetteer, const SeedList& labeled) {
  std::map<std::string, EntityType> batch;
  for (const auto& [surface, type] : labeled) {
    auto [it, inserted] = batch.emplace(normalize_surface(surface), type);
    if (!inserted && it->second != type) {
      throw Error(ErrorCode::kValidation, "conflicting labels for one surface in the labeled batch", surface);
    }
  }
  GazetteerBuilder builder(gazetteer);
  for (const auto& [surface, type] : labeled) builder.add(surface, type, GazetteerBuilder::Policy::kOverride);
  return std::move(builder).build();
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::optional<FuzzyHit> fuzzy_match(std::string_view token, const Gazetteer& gazetteer, const FuzzyConfig& config) {
  const std::string t = normalize_surface(textprep::strip_hash(token));
  if (!config.enabled || t.size() < config.min_len) return std::nullopt;

  std::optional<FuzzyHit> best;
  std::size_t best_distance = 0;
  std::string best_surface;
  for (const auto& [surface, type] : gazetteer.surfaces()) {
    const std::string form = strip_spaces(textprep::strip_hash(surface));
    if (form.size() < config.min_len || form == t) continue;

    std::optional<std::size_t> distance;
    const std::size_t gap = form.size() > t.size() ? form.size() - t.size() : t.size() - form.size();
    if (gap <= config.max_edit) {
      const std::size_t d = levenshtein(t, form);
      if (d <= config.max_edit) distance = d;
    }
    if (!distance && type == EntityType::kVacType && t.size() >= config.affix_min_len && t.size() < form.size() &&
        (form.compare(0, t.size(), t) == 0 || form.compare(form.size() - t.size(), t.size(), t) == 0)) {
      distance = form.size() - t.size();
    }
    if (!distance) continue;
    if (!best || *distance < best_distance || (*distance == best_distance && surface < best_surface)) {
      best_distance = *distance;
      best_surface = surface;
      const double len = static_cast<double>(std::max(t.size(), form.size()));
      best = FuzzyHit{type, 1.0 - static_cast<double>(*distance) / len, surface};
    }
  }
  return best;
}

namespace {

// Surnames that name a vaccine only in vaccine context.
bool is_ambiguous(std::string_view token) { return textprep::strip_hash(token) == "johnson"; }

bool is_numeric(std::string_view t) {
  if (t.empty() || !std::isdigit(static_cast<unsigned char>(t.front()))) return false;
  return std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == ',' || c == '.'; });
}

bool is_wordlike(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || static_cast<unsigned char>(c) >= 0x80;
  });
}

bool is_year(std::string_view t) {
  if (t.size() != 4 || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return false;
  }
  const int y = std::stoi(std::string(t));
  return y >= 1900 && y <= 2100;
}

bool is_day_number(std::string_view t) {
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0 || i > 2) return false;
  const std::string_view suffix = t.substr(i);
  if (!(suffix.empty() || suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th")) return false;
  const int d = std::stoi(std::string(t.substr(0, i)));
  return d >= 1 && d <= 31;
}

const std::set<std::string_view>& months() {
  static const std::set<std::string_view> m = {"january", "february", "march",     "april",   "may",      "june",
                                              "july",    "august",   "september", "october", "november", "december"};
  return m;
}

// Month names that double as ordinary words need a number next to them.
bool month_needs_number(std::string_view m) { return m == "may" || m == "march"; }

const std::set<std::string_view>& magnitude_words() {
  static const std::set<std::string_view> m = {"thousand", "million", "billion", "trillion", "bn", "mn"};
  return m;
}

const std::set<std::string_view>& plural_magnitudes() {
  static const std::set<std::string_view> m = {"thousands", "millions", "billions", "trillions"};
  return m;
}

const std::set<std::string_view>& money_words() {
  static const std::set<std::string_view> m = {
      "dollar", "dollars", "usd",   "eur",    "euro",    "euros",  "pound",  "pounds", "gbp",     "bucks",
      "money",  "paid",    "pay",   "paying", "profit",  "profits", "cost",  "costs",  "funding", "funded",
      "fund",   "funds",   "cash",  "revenue", "price",  "prices", "earned", "earn",   "made",    "making"};
  return m;
}

const std::set<std::string_view>& currency_words() {
  static const std::set<std::string_view> m = {"dollar", "dollars", "usd", "eur", "euro", "euros", "pound", "pounds", "gbp", "bucks"};
  return m;
}

const std::set<std::string_view>& vaccine_words() {
  static const std::set<std::string_view> m = {"vaccine", "vaccines", "#vaccine", "#vaccines", "vax", "jab", "jabs"};
  return m;
}

class Scanner {
 public:
  Scanner(const textprep::TokenizedText& text, const Gazetteer& g, const FuzzyConfig& cfg)
      : tokens_(text.tokens), currency_(text.currency), g_(g), cfg_(cfg), covered_(tokens_.size(), false) {}

  std::vector<EntitySpan> run() {
    exact_pass();
    fuzzy_pass();
    ambiguity_pass();
    rule_pass();
    std::sort(spans_.begin(), spans_.end(), [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
    return std::move(spans_);
  }

 private:
  bool free(std::size_t from, std::size_t to) const {
    for (std::size_t i = from; i < to; ++i) {
      if (covered_[i]) return false;
    }
    return true;
  }

  void emit(std::size_t start, std::size_t end, EntityType type, MatchMethod method, double score, std::string canonical) {
    EntitySpan s;
    s.start = start;
    s.end = end;
    std::vector<std::string> parts(tokens_.begin() + static_cast<std::ptrdiff_t>(start),
                                   tokens_.begin() + static_cast<std::ptrdiff_t>(end));
    s.surface = textprep::join(parts);
    s.canonical = canonical.empty() ? s.surface : std::move(canonical);
    s.type = type;
    s.method = method;
    s.score = score;
    for (std::size_t i = start; i < end; ++i) covered_[i] = true;
    spans_.push_back(std::move(s));
  }

  std::optional<Gazetteer::Entry> lookup_phrase(std::size_t start, std::size_t len) const {
    std::vector<std::string> parts(tokens_.begin() + static_cast<std::ptrdiff_t>(start),
                                   tokens_.begin() + static_cast<std::ptrdiff_t>(start + len));
    if (auto hit = g_.lookup(textprep::join(parts))) return hit;
    bool had_hash = false;
    for (auto& p : parts) {
      if (textprep::is_hashtag(p)) {
        p.erase(0, 1);
        had_hash = true;
      }
    }
    if (had_hash) return g_.lookup(textprep::join(parts));
    return std::nullopt;
  }

  void exact_pass() {
    std::size_t i = 0;
    while (i < tokens_.size()) {
      bool matched = false;
      for (std::size_t len = std::min<std::size_t>(3, tokens_.size() - i); len >= 1; --len) {
        if (len == 1 && is_ambiguous(tokens_[i])) break;
        if (auto hit = lookup_phrase(i, len)) {
          emit(i, i + len, hit->type, MatchMethod::kExact, 1.0, hit->surface);
          i += len;
          matched = true;
          break;
        }
      }
      if (!matched) ++i;
    }
  }

  void fuzzy_pass() {
    if (!cfg_.enabled) return;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (covered_[i] || is_ambiguous(tokens_[i]) || !is_wordlike(textprep::strip_hash(tokens_[i]))) continue;
      if (auto hit = fuzzy_match(tokens_[i], g_, cfg_)) {
        emit(i, i + 1, hit->type, MatchMethod::kFuzzy, hit->score, hit->surface);
      }
    }
  }

  bool near_vaccine(std::size_t i) const {
    const std::size_t lo = i >= 3 ? i - 3 : 0;
    const std::size_t hi = std::min(tokens_.size(), i + 4);
    for (std::size_t j = lo; j < hi; ++j) {
      if (j != i && vaccine_words().count(tokens_[j])) return true;
    }
    for (const auto& s : spans_) {
      if (s.type != EntityType::kVacType || (s.start <= i && i < s.end)) continue;
      const std::size_t gap = s.start > i ? s.start - i : i - (s.end - 1);
      if (gap <= 3) return true;
    }
    return false;
  }

  void ambiguity_pass() {
    // Evaluate every ambiguous token against the non-ambiguous spans first so
    // the outcome does not depend on scan order.
    std::vector<std::pair<std::size_t, bool>> decisions;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!covered_[i] && is_ambiguous(tokens_[i])) decisions.emplace_back(i, near_vaccine(i));
    }
    for (const auto& [i, vaccine] : decisions) {
      emit(i, i + 1, vaccine ? EntityType::kVacType : EntityType::kPerson, MatchMethod::kRule, 1.0,
           std::string(textprep::strip_hash(tokens_[i])));
    }
  }

  bool money_context(std::size_t i) const {
    const std::size_t lo = i >= 3 ? i - 3 : 0;
    const std::size_t hi = std::min(tokens_.size(), i + 4);
    for (std::size_t j = lo; j < hi; ++j) {
      if (j != i && (money_words().count(tokens_[j]) || (currency_[j] && is_numeric(tokens_[j])))) return true;
    }
    return false;
  }

  void rule_pass() {
    std::size_t i = 0;
    const std::size_t n = tokens_.size();
    while (i < n) {
      if (covered_[i]) {
        ++i;
        continue;
      }
      const std::string& t = tokens_[i];

      if (months().count(t)) {
        std::size_t end = i + 1;
        if (end < n && !covered_[end] && is_day_number(tokens_[end])) ++end;
        if (end < n && !covered_[end] && is_year(tokens_[end])) ++end;
        if (end > i + 1 || !month_needs_number(t)) {
          emit(i, end, EntityType::kDate, MatchMethod::kRule, 1.0, {});
          i = end;
          continue;
        }
      }

      // "5 march 2021"
      if (is_day_number(t) && i + 1 < n && !covered_[i + 1] && months().count(tokens_[i + 1])) {
        std::size_t end = i + 2;
        if (end < n && !covered_[end] && is_year(tokens_[end])) ++end;
        emit(i, end, EntityType::kDate, MatchMethod::kRule, 1.0, {});
        i = end;
        continue;
      }

      if (is_numeric(t)) {
        if (is_year(t) && !currency_[i]) {
          emit(i, i + 1, EntityType::kDate, MatchMethod::kRule, 1.0, {});
          ++i;
          continue;
        }
        std::size_t end = i + 1;
        if (end < n && !covered_[end] && magnitude_words().count(tokens_[end])) ++end;
        bool money = currency_[i];
        if (end < n && !covered_[end] && currency_words().count(tokens_[end])) {
          ++end;
          money = true;
        }
        emit(i, end, money ? EntityType::kMoney : EntityType::kCardinal, MatchMethod::kRule, 1.0, {});
        i = end;
        continue;
      }

      if (plural_magnitudes().count(t)) {
        emit(i, i + 1, money_context(i) ? EntityType::kMoney : EntityType::kCardinal, MatchMethod::kRule, 1.0, {});
        ++i;
        continue;
      }
      ++i;
    }
  }

  const std::vector<std::string>& tokens_;
  const std::vector<bool>& currency_;
  const Gazetteer& g_;
  const FuzzyConfig& cfg_;
  std::vector<bool> covered_;
  std::vector<EntitySpan> spans_;
};

}  // namespace

std::vector<EntitySpan> recognize(const textprep::TokenizedText& text, const Gazetteer& gazetteer,
                                  const FuzzyConfig& config) {
  if (text.currency.size() != text.tokens.size()) {
    textprep::TokenizedText copy = text;
    copy.currency.assign(copy.tokens.size(), false);
    return Scanner(copy, gazetteer, config).run();
  }
  return Scanner(text, gazetteer, config).run();
}

std::vector<GoldSpan> to_gold(const std::vector<EntitySpan>& spans) {
  std::vector<GoldSpan> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.push_back({s.start, s.end, s.type});
  return out;
}

EvalMetrics evaluate(const std::vector<std::vector<GoldSpan>>& predicted,
                     const std::vector<std::vector<GoldSpan>>& gold) {
  if (predicted.size() != gold.size()) throw Error(ErrorCode::kInvalidArgument, "predicted and gold are not aligned");
  std::map<EntityType, std::size_t> tp, n_pred, n_gold;
  std::size_t total_gold = 0;
  std::size_t total_tp = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::set<GoldSpan> g(gold[i].begin(), gold[i].end());
    std::set<GoldSpan> p(predicted[i].begin(), predicted[i].end());
    for (const auto& s : g) ++n_gold[s.type];
    for (const auto& s : p) {
      ++n_pred[s.type];
      if (g.count(s)) {
        ++tp[s.type];
        ++total_tp;
      }
    }
    total_gold += g.size();
  }
  if (total_gold == 0) throw Error(ErrorCode::kInvalidArgument, "empty gold set");

  std::set<EntityType> types;
  for (const auto& [t, c] : n_pred) types.insert(t);
  for (const auto& [t, c] : n_gold) types.insert(t);

  EvalMetrics m;
  m.accuracy = static_cast<double>(total_tp) / static_cast<double>(total_gold);
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  std::size_t p_n = 0, r_n = 0;
  for (auto t : types) {
    const double hits = static_cast<double>(tp[t]);
    double p = 0.0, r = 0.0;
    if (n_pred[t] > 0) {
      p = hits / static_cast<double>(n_pred[t]);
      p_sum += p;
      ++p_n;
    }
    if (n_gold[t] > 0) {
      r = hits / static_cast<double>(n_gold[t]);
      r_sum += r;
      ++r_n;
    }
    f_sum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  m.precision = p_n ? p_sum / static_cast<double>(p_n) : 0.0;
  m.recall = r_n ? r_sum / static_cast<double>(r_n) : 0.0;
  m.f1 = types.empty() ? 0.0 : f_sum / static_cast<double>(types.size());
  return m;
}

std::map<std::string, std::vector<GoldSpan>> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read gold file", path.string());
  std::map<std::string, std::vector<GoldSpan>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      std::vector<GoldSpan> spans;
      for (const auto& s : j.at("spans")) {
        auto type = parse_entity_type(s.at("type").get<std::string>());
        if (!type) throw Error(ErrorCode::kValidation, "unknown entity type");
        GoldSpan g{s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>(), *type};
        if (g.start >= g.end) throw Error(ErrorCode::kValidation, "span start must precede end");
        spans.push_back(g);
      }
      out[j.at("id").get<std::string>()] = std::move(spans);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kValidation, "malformed gold record", path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, e.what(), path.string() + ":" + std::to_string(line_no));
    }
  }
  return out;
}

}  // namespace concierge::entities
