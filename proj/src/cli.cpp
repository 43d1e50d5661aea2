#include "mythqa/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mythqa/config.hpp"
#include "mythqa/corpus.hpp"
#include "mythqa/dumps.hpp"
#include "mythqa/error.hpp"
#include "mythqa/gold.hpp"
#include "mythqa/metrics.hpp"
#include "mythqa/pipeline.hpp"
#include "mythqa/remote.hpp"
#include "mythqa/report.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/suggest.hpp"

namespace mythqa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

constexpr const char* kCorpusFile = "corpus.jsonl";
constexpr const char* kStatsFile = "stats.json";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kBm25File = "bm25.idx";
constexpr const char* kDenseFile = "dense.idx";
constexpr const char* kIndexMeta = "index.json";

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_json_file(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

// Everything the subcommands bind their flags to.
struct Options {
  std::string config;

  // ingest
  std::string corpus;
  std::string out;
  std::string dataset;

  // index
  std::string corpus_dir;
  bool dense = false;
  bool hashing_dense = false;
  std::size_t dim = 256;
  std::string endpoint;
  double k1 = 0.9;
  double b = 0.4;
  bool stopwords = false;
  bool stem = false;

  // ask
  std::string question;
  std::string question_id = "q0";
  std::string qtype;
  bool all = false;
  std::size_t k = 100;
  std::size_t m = 5;
  std::size_t e = 1;
  double lambda = 0.5;
  std::string mode = "extrinsic";
  std::string index_dir;
  std::string retriever = "bm25";
  std::string scorer = "auto";
  std::string extractor = "auto";
  std::string fixtures;
  bool generative = false;
  std::size_t workers = 0;
  std::string orientation = "tweet-premise";
  bool reuse_question_retrieval = false;
  double retrieval_blend = 0.0;
  std::string retrieval_out;
  std::string manifest;
  std::size_t max_batch = 64;
  std::size_t max_in_flight = 4;

  // eval
  std::string predictions;
  std::vector<std::size_t> e_list = {1, 10, 100};
  std::vector<std::size_t> k_list = {100, 1000};
  std::string retrieval;
  std::string stance;
  std::string format = "json";

  // suggest
  std::string tmpl;
  std::string aliases;
  std::uint64_t seed = 13;
  std::size_t pool_size = 1000;
  std::size_t clusters = 5;
  std::size_t per_cluster = 20;
  std::size_t kmeans_iters = 50;

  // replay
  bool force = false;
};

remote::ClientOptions client_options(const Options& o) {
  remote::ClientOptions c;
  c.max_batch = o.max_batch;
  c.max_in_flight = o.max_in_flight;
  return c;
}

RunManifest start_manifest(const std::string& command, const std::vector<std::string>& argv) {
  RunManifest m;
  m.version = tool_version();
  m.command = command;
  m.argv = argv;
  return m;
}

Corpus load_corpus_dir(const std::string& dir, RunManifest* manifest) {
  const fs::path p = fs::path(dir) / kCorpusFile;
  if (!fs::exists(p)) throw Error("no " + std::string(kCorpusFile) + " in " + dir);
  if (manifest) manifest->add_input(p);
  return load_corpus(p);
}

// ---- ingest ---------------------------------------------------------------

int do_ingest(const Options& o, RunManifest manifest, std::ostream& out) {
  manifest.add_input(o.corpus);
  IngestReport rep;
  const Corpus corpus = load_corpus(o.corpus, &rep);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  save_corpus(dir / kCorpusFile, corpus);

  json stats = {{"ingest", to_json(rep)}, {"tweets", corpus.size()}};
  if (!o.dataset.empty()) {
    manifest.add_input(o.dataset);
    stats["dataset"] = to_json(corpus_stats(load_dataset(o.dataset, corpus)));
  }
  write_json_file(dir / kStatsFile, stats);

  manifest.config = {{"corpus", o.corpus}, {"out", o.out}, {"dataset", o.dataset}};
  manifest.save(dir / kManifestFile);

  out << "lines " << rep.lines << " kept " << rep.kept << " retweets " << rep.retweets
      << " duplicates " << rep.duplicates << " empty " << rep.empty << '\n';
  return 0;
}

// ---- index ----------------------------------------------------------------

int do_index(const Options& o, RunManifest manifest, std::ostream& out) {
  if (o.dense && o.endpoint.empty()) {
    throw UsageError("--dense needs --endpoint (or MYTHQA_ENDPOINT)");
  }
  if (o.dense && o.hashing_dense) throw UsageError("--dense and --hashing-dense are exclusive");
  const Corpus corpus = load_corpus_dir(o.corpus_dir, &manifest);
  const fs::path dir(o.out);
  fs::create_directories(dir);

  const Bm25Params params{o.k1, o.b};
  const AnalyzerConfig analyzer{o.stopwords, o.stem};
  const auto index = InvertedIndex::build(corpus, params, analyzer);
  index.save(dir / kBm25File);

  json meta = {{"docs", corpus.size()},
               {"bm25", {{"k1", o.k1}, {"b", o.b}, {"stopwords", o.stopwords}, {"stem", o.stem}}}};
  if (o.dense || o.hashing_dense) {
    std::unique_ptr<EmbeddingProvider> provider;
    if (o.dense) {
      provider = std::make_unique<remote::RemoteEmbedder>(remote::Endpoint::parse(o.endpoint),
                                                          client_options(o));
    } else {
      provider = std::make_unique<HashingEmbedder>(o.dim);
    }
    const auto dense = DenseIndex::build(corpus, *provider, o.max_batch);
    dense.save(dir / kDenseFile);
    meta["dense"] = {{"provider", o.dense ? "remote" : "hashing"},
                     {"name", provider->name()},
                     {"dim", provider->dim()}};
  }
  write_json_file(dir / kIndexMeta, meta);

  manifest.config = meta;
  manifest.save(dir / kManifestFile);
  out << "indexed " << corpus.size() << " tweets, " << index.term_count() << " terms\n";
  return 0;
}

// ---- shared retrieval setup -----------------------------------------------

struct RetrievalStack {
  Corpus corpus;
  std::shared_ptr<const InvertedIndex> bm25;
  std::shared_ptr<const DenseIndex> dense;
  std::shared_ptr<const EmbeddingProvider> embedder;
  std::unique_ptr<Retriever> retriever;
  json config = json::object();
};

template <class Index>
void check_alignment(const Index& index, const Corpus& corpus, const std::string& what) {
  bool ok = index.doc_count() == corpus.size();
  for (std::size_t i = 0; ok && i < corpus.size(); ++i) ok = index.doc_id(i) == corpus.at(i).id;
  if (!ok) throw ValidationError(what + " does not match the corpus; rebuild it");
}

RetrievalStack open_retrieval(const Options& o, RunManifest& manifest) {
  RetrievalStack s;
  if (o.corpus_dir.empty()) {
    if (!o.index_dir.empty()) throw UsageError("--index-dir needs --corpus-dir");
    s.retriever = std::make_unique<EmptyRetriever>();
    s.config = {{"retriever", "empty"}};
    return s;
  }
  s.corpus = load_corpus_dir(o.corpus_dir, &manifest);
  if (s.corpus.empty()) {
    s.retriever = std::make_unique<EmptyRetriever>();
    s.config = {{"retriever", "empty"}};
    return s;
  }
  const fs::path dir = o.index_dir.empty() ? fs::path(o.corpus_dir) : fs::path(o.index_dir);

  if (o.retriever == "bm25") {
    const fs::path p = dir / kBm25File;
    if (fs::exists(p)) {
      manifest.add_input(p);
      s.bm25 = std::make_shared<const InvertedIndex>(InvertedIndex::load(p));
      check_alignment(*s.bm25, s.corpus, p.string());
    } else {
      s.bm25 = std::make_shared<const InvertedIndex>(
          InvertedIndex::build(s.corpus, Bm25Params{o.k1, o.b}, AnalyzerConfig{o.stopwords, o.stem}));
    }
    s.retriever = std::make_unique<Bm25Retriever>(s.bm25);
    s.config = {{"retriever", "bm25"},
                {"k1", s.bm25->params().k1},
                {"b", s.bm25->params().b},
                {"stopwords", s.bm25->analyzer().remove_stopwords},
                {"stem", s.bm25->analyzer().stem}};
    return s;
  }

  const fs::path p = dir / kDenseFile;
  const fs::path meta_path = dir / kIndexMeta;
  if (!fs::exists(p) || !fs::exists(meta_path)) throw Error("no dense index in " + dir.string());
  manifest.add_input(p);
  const json meta = read_json_file(meta_path);
  s.dense = std::make_shared<const DenseIndex>(DenseIndex::load(p));
  check_alignment(*s.dense, s.corpus, p.string());
  const std::string provider = meta.at("dense").at("provider").get<std::string>();
  if (provider == "hashing") {
    s.embedder = std::make_shared<HashingEmbedder>(s.dense->dim());
  } else {
    if (o.endpoint.empty()) throw UsageError("dense index was built remotely; pass --endpoint");
    s.embedder = std::make_shared<remote::RemoteEmbedder>(remote::Endpoint::parse(o.endpoint),
                                                          s.dense->dim(), client_options(o));
  }
  s.retriever = std::make_unique<DenseRetriever>(s.dense, s.embedder);
  s.config = {{"retriever", "dense"}, {"provider", s.embedder->name()}, {"dim", s.dense->dim()}};
  return s;
}

// ---- ask ------------------------------------------------------------------

int do_ask(const Options& o, RunManifest manifest, std::ostream& out, std::ostream& err) {
  if (!o.question.empty() && o.qtype.empty()) throw UsageError("--question needs --qtype");
  if (o.question.empty() && o.dataset.empty()) {
    throw UsageError("pass --question (with --qtype) or --dataset");
  }
  const std::string scorer_kind =
      o.scorer != "auto" ? o.scorer : (o.endpoint.empty() ? "lexical" : "remote");
  const std::string extractor_kind =
      o.extractor != "auto" ? o.extractor : (o.endpoint.empty() ? "mock" : "remote");
  if ((scorer_kind == "remote" || extractor_kind == "remote") && o.endpoint.empty()) {
    throw UsageError("remote components need --endpoint (or MYTHQA_ENDPOINT)");
  }
  if (!o.fixtures.empty() && extractor_kind != "mock") {
    throw UsageError("--fixtures only applies to the mock extractor");
  }

  PipelineConfig cfg;
  cfg.k = o.k;
  cfg.m = o.m;
  cfg.e = o.e;
  cfg.lambda = o.lambda;
  cfg.mode = parse_eval_mode(o.mode);
  cfg.reuse_question_retrieval = o.reuse_question_retrieval;
  cfg.retrieval_blend = o.retrieval_blend;
  cfg.record_retrieval = !o.retrieval_out.empty();
  cfg.workers = o.workers;
  cfg.validate();

  RetrievalStack rs = open_retrieval(o, manifest);

  std::optional<Dataset> dataset;
  if (!o.dataset.empty()) {
    manifest.add_input(o.dataset);
    dataset = rs.corpus.empty() ? read_dataset(o.dataset) : load_dataset(o.dataset, rs.corpus);
  }
  if ((cfg.mode == EvalMode::Intrinsic || scorer_kind == "gold" || extractor_kind == "gold") &&
      !dataset) {
    throw UsageError("intrinsic mode and gold components need --dataset");
  }

  std::vector<Question> questions;
  if (!o.question.empty()) {
    Question q{o.question_id, o.question, parse_question_type(o.qtype), ""};
    if (dataset) {
      if (const auto* rec = dataset->find(q.id)) q.topic = rec->question.topic;
    }
    questions.push_back(std::move(q));
  } else if (o.all) {
    for (const auto& rec : dataset->records()) questions.push_back(rec.question);
  } else {
    const auto* rec = dataset->find(o.question_id);
    if (!rec) throw UsageError("question '" + o.question_id + "' is not in the dataset; use --all");
    questions.push_back(rec->question);
  }

  const remote::ClientOptions copts = client_options(o);
  std::unique_ptr<StanceScorer> scorer;
  if (scorer_kind == "lexical") {
    scorer = std::make_unique<LexicalBaselineScorer>();
  } else if (scorer_kind == "remote") {
    const auto orient = o.orientation == "claim-premise" ? remote::NliOrientation::ClaimPremise
                                                         : remote::NliOrientation::TweetPremise;
    scorer = std::make_unique<remote::RemoteNliScorer>(remote::Endpoint::parse(o.endpoint), copts,
                                                       orient);
  } else {
    scorer = std::make_unique<gold::GoldScorer>(*dataset);
  }

  std::unique_ptr<AnswerExtractor> extractor;
  if (extractor_kind == "mock") {
    if (o.fixtures.empty()) {
      extractor = std::make_unique<MockExtractor>(o.generative);
    } else {
      manifest.add_input(o.fixtures);
      extractor = std::make_unique<MockExtractor>(MockExtractor::load(o.fixtures, o.generative));
    }
  } else if (extractor_kind == "remote") {
    extractor = std::make_unique<remote::RemoteExtractor>(remote::Endpoint::parse(o.endpoint),
                                                          copts, o.generative);
  } else {
    extractor = std::make_unique<gold::GoldExtractor>(*dataset);
  }

  const Pipeline pipeline(rs.corpus, *rs.retriever, *scorer, *extractor,
                          dataset ? &*dataset : nullptr);
  const auto preds = pipeline.run(questions, cfg);
  dumps::write_predictions(out, preds);
  if (!o.retrieval_out.empty()) {
    auto f = open_out(o.retrieval_out);
    dumps::write_retrieval(f, preds);
  }
  err << "answered " << preds.size() << " question(s)\n";

  if (!o.manifest.empty()) {
    manifest.config = {{"k", cfg.k},
                       {"m", cfg.m},
                       {"e", cfg.e},
                       {"lambda", cfg.lambda},
                       {"mode", to_string(cfg.mode)},
                       {"reuse_question_retrieval", cfg.reuse_question_retrieval},
                       {"retrieval_blend", cfg.retrieval_blend},
                       {"workers", cfg.workers},
                       {"retrieval", rs.config},
                       {"scorer", scorer->name()},
                       {"extractor", extractor->name()},
                       {"orientation", o.orientation}};
    manifest.save(o.manifest);
  }
  return 0;
}

// ---- eval -----------------------------------------------------------------

int do_eval(const Options& o, RunManifest manifest, std::ostream& out) {
  manifest.add_input(o.dataset);
  manifest.add_input(o.predictions);
  Dataset dataset;
  if (!o.corpus_dir.empty()) {
    dataset = load_dataset(o.dataset, load_corpus_dir(o.corpus_dir, &manifest));
  } else {
    dataset = read_dataset(o.dataset);
  }
  const auto preds = dumps::load_predictions(o.predictions);

  metrics::EvalOptions opts;
  opts.e_values = o.e_list;
  opts.k_values = o.k_list;

  std::optional<std::map<std::string, std::vector<RankedTweet>>> retrieval;
  if (!o.retrieval.empty()) {
    manifest.add_input(o.retrieval);
    retrieval = dumps::load_retrieval(o.retrieval);
  } else {
    std::map<std::string, std::vector<RankedTweet>> embedded;
    for (const auto& p : preds) {
      if (!p.retrieved.empty()) embedded[p.question_id] = p.retrieved;
    }
    if (!embedded.empty()) retrieval = std::move(embedded);
  }
  std::optional<std::vector<metrics::StancePair>> stance;
  if (!o.stance.empty()) {
    manifest.add_input(o.stance);
    stance = dumps::load_stance_pairs(o.stance);
  }

  const auto report = metrics::evaluate(dataset, preds, opts, retrieval ? &*retrieval : nullptr,
                                        stance ? &*stance : nullptr);
  if (o.format == "text") {
    metrics::print_report(out, report);
  } else {
    out << metrics::to_json(report).dump(2) << '\n';
  }
  if (!o.manifest.empty()) {
    manifest.config = {{"e", o.e_list}, {"k", o.k_list}, {"format", o.format}};
    manifest.save(o.manifest);
  }
  return 0;
}

// ---- suggest --------------------------------------------------------------

int do_suggest(const Options& o, RunManifest manifest, std::ostream& out) {
  const QueryTemplate tmpl(o.tmpl);
  const auto aliases = split_csv(o.aliases);
  if (aliases.empty()) throw UsageError("--aliases needs at least one alias");

  Options ro = o;
  ro.retriever = "bm25";
  RetrievalStack rs = open_retrieval(ro, manifest);
  std::unique_ptr<EmbeddingProvider> provider;
  if (!o.endpoint.empty()) {
    provider = std::make_unique<remote::RemoteEmbedder>(remote::Endpoint::parse(o.endpoint),
                                                        client_options(o));
  }

  SuggestConfig cfg;
  cfg.pool_size = o.pool_size;
  cfg.clusters = o.clusters;
  cfg.per_cluster = o.per_cluster;
  cfg.kmeans_iters = o.kmeans_iters;
  cfg.seed = o.seed;
  const auto picks =
      suggest_candidates(tmpl, aliases, rs.corpus, provider.get(), *rs.retriever, cfg);

  {
    auto f = open_out(o.out);
    for (const auto& s : picks) {
      f << json{{"tweet_id", s.tweet.id},
                {"text", s.tweet.text},
                {"cluster", s.cluster},
                {"similarity", s.similarity},
                {"rank", s.rank}}
               .dump()
        << '\n';
    }
  }
  manifest.config = {{"template", o.tmpl},
                     {"aliases", aliases},
                     {"pool_size", cfg.pool_size},
                     {"clusters", cfg.clusters},
                     {"per_cluster", cfg.per_cluster},
                     {"kmeans_iters", cfg.kmeans_iters},
                     {"seed", cfg.seed},
                     {"retrieval", rs.config},
                     {"ranker", provider ? provider->name() : "retrieval-score"}};
  manifest.save(o.out + ".manifest.json");
  out << "suggested " << picks.size() << " tweet(s)\n";
  return 0;
}

// ---- config injection -----------------------------------------------------

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  for (const auto& a : args) {
    if (a == name || a.rfind(name + "=", 0) == 0) return true;
  }
  return false;
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

bool truthy(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

// Appends config-file values for the chosen subcommand's flags that the
// command line leaves unset. Keys under a [section] apply only to the
// subcommand of that name.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  const std::string path = find_config(args);
  if (path.empty()) return args;
  const ConfigFile cfg = ConfigFile::load(path);

  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (a.empty() || a[0] == '-') continue;
    sub = app.get_subcommand_no_throw(a);
    break;
  }
  if (!sub) return args;

  std::set<std::string> known;
  for (const auto* s : app.get_subcommands({})) {
    for (const auto* opt : s->get_options()) {
      for (const auto& n : opt->get_lnames()) known.insert(n);
    }
  }
  for (const auto& [full, value] : cfg.values) {
    std::string key = full;
    if (const auto dot = full.find('.'); dot != std::string::npos) {
      if (!app.get_subcommand_no_throw(full.substr(0, dot))) {
        throw ParseError(path + ": unknown section in key '" + full + "'");
      }
      if (full.substr(0, dot) != sub->get_name()) continue;
      key = full.substr(dot + 1);
    }
    if (key == "config") continue;
    if (!known.count(key)) throw ParseError(path + ": unknown key '" + full + "'");
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt || has_flag(args, "--" + key)) continue;
    if (opt->get_expected_max() == 0) {
      if (truthy(value, full)) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

int run_args(std::vector<std::string> args, std::ostream& out, std::ostream& err, int depth);

int do_replay(const Options& o, std::ostream& out, std::ostream& err, int depth) {
  if (depth > 0) throw UsageError("a replay manifest cannot itself be a replay");
  const RunManifest m = RunManifest::load(o.manifest);
  if (m.version != tool_version()) {
    err << "warning: manifest written by version " << m.version << ", running " << tool_version()
        << '\n';
  }
  const auto changed = m.changed_inputs();
  if (!changed.empty() && !o.force) {
    std::string list;
    for (const auto& c : changed) list += (list.empty() ? "" : ", ") + c;
    throw ValidationError("inputs changed since the manifest was written: " + list);
  }
  return run_args(m.argv, out, err, depth + 1);
}

int run_args(std::vector<std::string> args, std::ostream& out, std::ostream& err, int depth) {
  Options o;
  CLI::App app{"Multi-answer question answering and contradictory evidence mining over tweets",
               "mythqa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  const auto add_config = [&](CLI::App* s) {
    s->add_option("--config", o.config, "key = value config file; flags override it");
  };
  const auto add_endpoint = [&](CLI::App* s) {
    s->add_option("--endpoint", o.endpoint, "model server URL")->envname("MYTHQA_ENDPOINT");
    s->add_option("--max-batch", o.max_batch, "items per model-server request")
        ->check(CLI::PositiveNumber);
    s->add_option("--max-in-flight", o.max_in_flight, "concurrent model-server requests")
        ->check(CLI::PositiveNumber);
  };
  const auto add_bm25 = [&](CLI::App* s) {
    s->add_option("--k1", o.k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    s->add_option("--b", o.b, "BM25 b")->check(CLI::Range(0.0, 1.0));
    s->add_flag("--stopwords", o.stopwords, "drop English stopwords");
    s->add_flag("--stem", o.stem, "strip plural endings");
  };

  auto* ingest = app.add_subcommand("ingest", "clean and persist a tweet corpus");
  ingest->add_option("--corpus", o.corpus, "tweet JSONL")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", o.out, "output directory")->required();
  ingest->add_option("--dataset", o.dataset, "annotated questions, for statistics")
      ->check(CLI::ExistingFile);
  add_config(ingest);

  auto* index = app.add_subcommand("index", "build retrieval indexes");
  index->add_option("--corpus-dir", o.corpus_dir, "ingested corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  index->add_option("--out", o.out, "output directory")->required();
  index->add_flag("--dense", o.dense, "also build a dense index via the model server");
  index->add_flag("--hashing-dense", o.hashing_dense, "also build a model-free dense index");
  index->add_option("--dim", o.dim, "hashing embedder dimension")->check(CLI::PositiveNumber);
  add_endpoint(index);
  add_bm25(index);
  add_config(index);

  auto* ask = app.add_subcommand("ask", "answer questions and mine stance evidence");
  ask->add_option("--question", o.question, "question text");
  ask->add_option("--question-id", o.question_id, "id for --question, or dataset question to answer");
  ask->add_option("--qtype", o.qtype, "entity or yesno")->check(CLI::IsMember({"entity", "yesno"}));
  ask->add_flag("--all", o.all, "answer every dataset question");
  ask->add_option("--k", o.k, "retrieval depth")->check(CLI::PositiveNumber);
  ask->add_option("--m", o.m, "answers per question")->check(CLI::PositiveNumber);
  ask->add_option("--e", o.e, "evidence per stance")->check(CLI::PositiveNumber);
  ask->add_option("--lambda", o.lambda, "weight of retrieval score in answer ranking")
      ->check(CLI::Range(0.0, 1.0));
  ask->add_option("--mode", o.mode, "extrinsic or intrinsic")
      ->check(CLI::IsMember({"extrinsic", "intrinsic"}));
  ask->add_option("--corpus-dir", o.corpus_dir, "ingested corpus directory")
      ->check(CLI::ExistingDirectory);
  ask->add_option("--index-dir", o.index_dir, "index directory (default: corpus dir)")
      ->check(CLI::ExistingDirectory);
  ask->add_option("--retriever", o.retriever, "bm25 or dense")->check(CLI::IsMember({"bm25", "dense"}));
  ask->add_option("--scorer", o.scorer, "auto, lexical, remote or gold")
      ->check(CLI::IsMember({"auto", "lexical", "remote", "gold"}));
  ask->add_option("--extractor", o.extractor, "auto, mock, remote or gold")
      ->check(CLI::IsMember({"auto", "mock", "remote", "gold"}));
  ask->add_option("--fixtures", o.fixtures, "mock extractor JSONL")->check(CLI::ExistingFile);
  ask->add_flag("--generative", o.generative, "rank answers by retrieval score only");
  ask->add_option("--dataset", o.dataset, "annotated questions")->check(CLI::ExistingFile);
  ask->add_option("--workers", o.workers, "parallel questions (0 = all cores)");
  ask->add_option("--orientation", o.orientation, "tweet-premise or claim-premise")
      ->check(CLI::IsMember({"tweet-premise", "claim-premise"}));
  ask->add_flag("--reuse-question-retrieval", o.reuse_question_retrieval,
                "mine entity evidence from the question's retrieval");
  ask->add_option("--retrieval-blend", o.retrieval_blend, "weight of retrieval score in evidence ranking")
      ->check(CLI::Range(0.0, 1.0));
  ask->add_option("--retrieval-out", o.retrieval_out, "write the question retrieval lists here");
  ask->add_option("--manifest", o.manifest, "write the run manifest here");
  add_endpoint(ask);
  add_bm25(ask);
  add_config(ask);

  auto* eval = app.add_subcommand("eval", "score predictions against the gold annotations");
  eval->add_option("--dataset", o.dataset, "annotated questions")->required()->check(CLI::ExistingFile);
  eval->add_option("--predictions", o.predictions, "prediction JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--e", o.e_list, "evidence cutoffs")->delimiter(',')->check(CLI::PositiveNumber);
  eval->add_option("--k", o.k_list, "retrieval cutoffs")->delimiter(',')->check(CLI::PositiveNumber);
  eval->add_option("--corpus-dir", o.corpus_dir, "check evidence ids against this corpus")
      ->check(CLI::ExistingDirectory);
  eval->add_option("--retrieval", o.retrieval, "retrieval dump JSONL")->check(CLI::ExistingFile);
  eval->add_option("--stance", o.stance, "stance prediction JSONL")->check(CLI::ExistingFile);
  eval->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  eval->add_option("--manifest", o.manifest, "write the run manifest here");
  add_config(eval);

  auto* suggest = app.add_subcommand("suggest", "suggest controversial tweets for annotation");
  suggest->add_option("--template", o.tmpl, "query with one TOPIC_ENTITY placeholder")->required();
  suggest->add_option("--aliases", o.aliases, "comma separated topic aliases")->required();
  suggest->add_option("--out", o.out, "output JSONL")->required();
  suggest->add_option("--corpus-dir", o.corpus_dir, "ingested corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  suggest->add_option("--index-dir", o.index_dir, "index directory (default: corpus dir)")
      ->check(CLI::ExistingDirectory);
  suggest->add_option("--seed", o.seed, "clustering seed");
  suggest->add_option("--pool-size", o.pool_size, "tweets kept after reranking")
      ->check(CLI::PositiveNumber);
  suggest->add_option("--clusters", o.clusters, "number of clusters");
  suggest->add_option("--per-cluster", o.per_cluster, "tweets per cluster")->check(CLI::PositiveNumber);
  suggest->add_option("--kmeans-iters", o.kmeans_iters, "k-means iteration cap")
      ->check(CLI::PositiveNumber);
  add_endpoint(suggest);
  add_bm25(suggest);
  add_config(suggest);

  auto* replay = app.add_subcommand("replay", "re-run a command from its manifest");
  replay->add_option("--manifest", o.manifest, "manifest JSON")->required()->check(CLI::ExistingFile);
  replay->add_flag("--force", o.force, "run even when input digests changed");

  std::vector<std::string> effective;
  try {
    effective = apply_config(app, std::move(args));
    std::vector<const char*> cargv{"mythqa"};
    for (const auto& a : effective) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  // Endpoints taken from the environment are pinned so replays don't depend on it.
  if (const auto* ep = chosen->get_option_no_throw("--endpoint");
      ep && ep->count() == 0 && !o.endpoint.empty()) {
    effective.push_back("--endpoint");
    effective.push_back(o.endpoint);
  }
  std::vector<std::string> recorded;
  for (std::size_t i = 0; i < effective.size(); ++i) {
    if (effective[i] == "--config") {
      ++i;
      continue;
    }
    if (effective[i].rfind("--config=", 0) == 0) continue;
    recorded.push_back(effective[i]);
  }
  RunManifest manifest = start_manifest(chosen->get_name(), recorded);

  if (chosen == ingest) return do_ingest(o, std::move(manifest), out);
  if (chosen == index) return do_index(o, std::move(manifest), out);
  if (chosen == ask) return do_ask(o, std::move(manifest), out, err);
  if (chosen == eval) return do_eval(o, std::move(manifest), out);
  if (chosen == suggest) return do_suggest(o, std::move(manifest), out);
  return do_replay(o, out, err, depth);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_args(args, out, err, 0);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace mythqa::cli
