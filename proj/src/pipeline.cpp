#include "concierge/pipeline.hpp"

#include "concierge/errors.hpp"
#include "concierge/json_codec.hpp"
#include "concierge/lda.hpp"
#include "concierge/log.hpp"
#include "concierge/textprep.hpp"
#include "concierge/timeutil.hpp"

#include <fstream>
#include <sstream>

namespace concierge::pipeline {

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read state file", path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kValidation, "state file is not valid JSON", path.string() + ": " + ex.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write state file", tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::kIo, "short write", tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<classifier::ClassifierModel> train_classifier(std::vector<AnnotatedPost>& posts,
                                                            const std::vector<textprep::TokenizedText>& texts,
                                                            const classifier::SelfTrainConfig& config,
                                                            std::int64_t generation) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(t.tokens);

  std::size_t misleading = 0, non_misleading = 0;
  for (const auto& p : posts) {
    if (!p.human_labeled()) continue;
    (p.label == Label::kMisleading ? misleading : non_misleading)++;
  }
  if (misleading == 0 || non_misleading == 0) {
    log::warn("classifier: the labeled seed lacks one of the classes; posts stay unlabeled");
    return std::nullopt;
  }

  classifier::ClassifierModel model;
  model.vectorizer = classifier::Vectorizer::fit(docs);
  model.config = config;
  model.version = generation;
  model.trained_at = timeutil::now();

  std::vector<classifier::Example> seed;
  std::vector<classifier::UnlabeledExample> unlabeled;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto x = model.vectorizer.transform(docs[i]);
    if (posts[i].human_labeled()) {
      seed.push_back({std::move(x), posts[i].label});
    } else {
      unlabeled.push_back({posts[i].post.id, std::move(x)});
    }
  }
  auto result = classifier::self_train(seed, unlabeled, model.vectorizer.size(), config);
  model.linear = std::move(result.model);
  model.seed_size = seed.size();
  model.pseudo_labeled = result.pseudo_labels.size();

  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto& p = posts[i];
    if (p.human_labeled()) continue;
    const auto prediction = model.predict(docs[i]);
    p.label = prediction.label;
    p.label_source = LabelSource::kModel;
    p.label_confidence = prediction.confidence;
  }
  log::info("classifier: seed " + std::to_string(seed.size()) + ", pseudo-labeled " +
            std::to_string(result.pseudo_labels.size()) + " in " + std::to_string(result.rounds) + " rounds");
  return model;
}

std::optional<nlohmann::ordered_json> summarize_topics(const std::vector<textprep::TokenizedText>& texts,
                                                       const Config& config) {
  if (!config.lda_enabled) return std::nullopt;
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(topics::lda_document(t.tokens));
  try {
    return topics::fit_lda(docs, config.lda).to_json();
  } catch (const Error& ex) {
    log::warn(std::string("lda: skipped: ") + ex.what());
    return std::nullopt;
  }
}

}  // namespace

std::shared_ptr<const Resources> Resources::load(const Config& config) {
  auto r = std::make_shared<Resources>();
  r->config = config;
  r->lexicon = topics::TopicLexicon::load(config.lexicon_path);
  r->base_gazetteer = entities::build_gazetteer_from_files(config.gazetteer_paths);
  if (!config.labeled_entities.empty()) r->labeled_entities = entities::load_seed_file(config.labeled_entities);
  r->sentiment =
      sentiment::SentimentLexicon::load(config.sentiment_lexicon, config.sentiment_boosters, config.sentiment_negations);
  r->embeddings = embeddings::load_embeddings(config.embeddings_path, config.embeddings_dim);
  return r;
}

AnnotateResult annotate(std::vector<AnnotatedPost> posts, const Resources& resources,
                        const std::vector<feedback::FeedbackRecord>& records, std::int64_t generation) {
  const auto& config = resources.config;
  const auto fb = feedback::resolve(records);
  AnnotateResult out;

  for (auto& p : posts) {
    // Feedback labels are replayed from the log below.
    if (p.label_source == LabelSource::kModel || p.label_source == LabelSource::kFeedback) {
      p.label = Label::kUnlabeled;
      p.label_source = LabelSource::kNone;
      p.label_confidence = 0.0;
    }
    if (auto it = fb.labels.find(p.post.id); it != fb.labels.end()) {
      p.label = it->second;
      p.label_source = LabelSource::kFeedback;
      p.label_confidence = 1.0;
      ++out.feedback_applied;
    }
  }

  std::vector<textprep::TokenizedText> texts;
  texts.reserve(posts.size());
  for (const auto& p : posts) texts.push_back(textprep::tokenize(p.post.text, config.prep));

  out.classifier = train_classifier(posts, texts, config.classifier, generation);
  out.lda = summarize_topics(texts, config);

  entities::Gazetteer gazetteer = resources.base_gazetteer;
  if (!resources.labeled_entities.empty()) gazetteer = entities::augment(gazetteer, resources.labeled_entities);
  if (!fb.entities.empty()) gazetteer = entities::augment(gazetteer, fb.entities);

  ModelVersions versions{generation, generation, generation, generation, generation};
  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto& p = posts[i];
    const auto& text = texts[i];
    Annotations a;
    a.topic = topics::label_topic(text, resources.lexicon);
    a.entities = entities::recognize(text, gazetteer, config.ner);
    const auto s = sentiment::score(text, resources.sentiment);
    a.sentiment = s.cls;
    a.compound = s.compound;
    a.coverage = embeddings::embed_post(p.post.id, text, resources.embeddings).coverage;
    a.versions = versions;
    if (auto it = fb.topics.find(p.post.id); it != fb.topics.end()) {
      a.topic = TopicLabel{it->second, {}, false};
      ++out.feedback_applied;
    }
    if (auto it = fb.sentiments.find(p.post.id); it != fb.sentiments.end()) {
      a.sentiment = it->second;
      ++out.feedback_applied;
    }
    p.annotations = std::move(a);
  }
  out.feedback_applied += fb.entities.size();
  out.gazetteer = std::move(gazetteer);
  out.posts = std::move(posts);
  return out;
}

SnapshotPtr make_snapshot(std::uint64_t version, Timestamp built_at, std::vector<AnnotatedPost> posts,
                          std::shared_ptr<const Resources> resources,
                          std::optional<classifier::ClassifierModel> classifier, entities::Gazetteer gazetteer,
                          std::optional<nlohmann::ordered_json> lda) {
  auto s = std::make_shared<PipelineSnapshot>();
  s->version = version;
  s->built_at = built_at;
  for (const auto& p : posts) {
    const auto text = textprep::tokenize(p.post.text, resources->config.prep);
    s->vectors.insert(embeddings::embed_post(p.post.id, text, resources->embeddings));
  }
  s->corpus = std::make_shared<const corpus::CorpusView>(std::move(posts), version);
  s->resources = std::move(resources);
  s->classifier = std::move(classifier);
  s->gazetteer = std::move(gazetteer);
  s->lda = std::move(lda);
  return s;
}

SnapshotPtr load_snapshot(std::shared_ptr<const Resources> resources, bool require_built) {
  const StatePaths state{resources->config.state_dir};
  auto store = corpus::CorpusStore::load(state.corpus());
  auto posts = store.snapshot()->posts();
  if (!std::filesystem::exists(state.snapshot())) {
    if (require_built) {
      throw Error(ErrorCode::kNotFound, "no annotated snapshot; run `annotate` first", state.snapshot().string());
    }
    return make_snapshot(0, 0, std::move(posts), resources, std::nullopt, resources->base_gazetteer, std::nullopt);
  }
  const auto meta = read_json(state.snapshot());
  std::optional<classifier::ClassifierModel> model;
  if (std::filesystem::exists(state.classifier())) model = classifier::model_from_json(read_json(state.classifier()));
  auto gazetteer = std::filesystem::exists(state.gazetteer()) ? gazetteer_from_json(read_json(state.gazetteer()))
                                                              : resources->base_gazetteer;
  std::optional<nlohmann::ordered_json> lda;
  if (std::filesystem::exists(state.lda())) {
    std::ifstream in(state.lda());
    lda = nlohmann::ordered_json::parse(in);
  }
  const auto version = meta.at("version").get<std::uint64_t>();
  const auto built_at = timeutil::parse(meta.value("built_at", std::string())).value_or(0);
  return make_snapshot(version, built_at, std::move(posts), std::move(resources), std::move(model),
                       std::move(gazetteer), std::move(lda));
}

SnapshotPtr rebuild(std::shared_ptr<const Resources> resources, std::uint64_t previous_version) {
  const StatePaths state{resources->config.state_dir};
  auto store = corpus::CorpusStore::load(state.corpus());
  const auto records = feedback::FeedbackLog::read(state.feedback());
  const std::uint64_t version = previous_version + 1;
  auto result = annotate(store.snapshot()->posts(), *resources, records, static_cast<std::int64_t>(version));
  const auto built_at = timeutil::now();

  std::ostringstream corpus_out;
  corpus::export_jsonl(corpus::CorpusView(result.posts, version), corpus_out);
  write_atomic(state.corpus(), corpus_out.str());
  if (result.classifier) {
    write_atomic(state.classifier(), classifier::to_json(*result.classifier).dump() + "\n");
  } else {
    std::filesystem::remove(state.classifier());
  }
  write_atomic(state.gazetteer(), gazetteer_to_json(result.gazetteer).dump(1) + "\n");
  if (result.lda) {
    write_atomic(state.lda(), result.lda->dump() + "\n");
  } else {
    std::filesystem::remove(state.lda());
  }
  nlohmann::ordered_json meta;
  meta["version"] = version;
  meta["built_at"] = timeutil::format_rfc3339(built_at);
  meta["posts"] = result.posts.size();
  meta["feedback_records"] = records.size();
  write_atomic(state.snapshot(), meta.dump(1) + "\n");

  return make_snapshot(version, built_at, std::move(result.posts), std::move(resources), std::move(result.classifier),
                       std::move(result.gazetteer), std::move(result.lda));
}

nlohmann::ordered_json analyze_text(const std::string& text, const PipelineSnapshot& snapshot) {
  const auto& res = *snapshot.resources;
  const auto t = textprep::tokenize(text, res.config.prep);
  nlohmann::ordered_json j;
  j["text"] = text;
  j["tokens"] = t.tokens;
  if (snapshot.classifier) {
    const auto p = snapshot.classifier->predict(t.tokens);
    j["label"] = std::string(to_string(p.label));
    j["label_confidence"] = p.confidence;
  } else {
    j["label"] = nullptr;
    j["label_confidence"] = nullptr;
  }
  OrderedJson topic;
  to_json(topic, topics::label_topic(t, res.lexicon));
  j["topic"] = topic;
  auto spans = OrderedJson::array();
  for (const auto& span : entities::recognize(t, snapshot.gazetteer, res.config.ner)) {
    OrderedJson s;
    to_json(s, span);
    spans.push_back(std::move(s));
  }
  j["entities"] = spans;
  const auto s = sentiment::score(t, res.sentiment);
  j["sentiment"] = {{"class", std::string(to_string(s.cls))},
                    {"compound", s.compound},
                    {"pos", s.pos},
                    {"neu", s.neu},
                    {"neg", s.neg}};
  j["coverage"] = embeddings::embed_post("", t, res.embeddings).coverage;
  return j;
}

nlohmann::ordered_json gazetteer_to_json(const entities::Gazetteer& gazetteer) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [surface, type] : gazetteer.surfaces()) {
    arr.push_back({{"surface", surface}, {"type", std::string(to_string(type))}});
  }
  return arr;
}

entities::Gazetteer gazetteer_from_json(const nlohmann::json& j) {
  return entities::build_gazetteer({entities::seed_list_from_json(j.dump(), "gazetteer.json")});
}

}  // namespace concierge::pipeline
