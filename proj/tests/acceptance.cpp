// Acceptance gate: one line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/gold.hpp"
#include "mythqa/metrics.hpp"
#include "mythqa/pipeline.hpp"
#include "mythqa/retrieval.hpp"
#include "oracle/bm25_oracle.hpp"
#include "oracle/metrics_oracle.hpp"
#include "support.hpp"

using namespace mythqa;
using namespace mythqa::metrics;

namespace {

constexpr double kBm25Tol = 1e-9;
constexpr double kHitsFloor = 97.0;
constexpr double kMhitsTarget = 98.58;
constexpr double kMhitsTol = 2.0;

struct Outcome {
  enum Kind { Pass, Fail, Waived } kind;
  std::string detail;
};

int failures = 0;

void gate(const std::string& name, double budget_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.kind != Outcome::Waived && budget_s > 0 && secs > budget_s) {
    o = {Outcome::Fail, o.detail + "; over budget " + std::to_string(budget_s) + "s"};
  }
  const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Fail ? "FAIL" : "WAIVED";
  if (o.kind == Outcome::Fail) ++failures;
  std::printf("%-6s %-28s %8.3fs  %s\n", tag, name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

// ---- random evaluation instances ------------------------------------------

struct Instance {
  bool yesno = false;
  std::vector<PredictedTuple> preds;
  std::vector<GoldTuple> golds;
  std::vector<RankedTweet> ranked;
};

std::vector<std::string> pick_ids(std::mt19937_64& rng, std::size_t max) {
  std::uniform_int_distribution<std::size_t> len(0, max), id(0, 7);
  std::vector<std::string> out(len(rng));
  for (auto& s : out) s = "t" + std::to_string(id(rng));
  return out;
}

std::vector<std::string> distinct_ids(std::mt19937_64& rng, std::size_t max) {
  auto v = pick_ids(rng, max);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

Instance random_instance(std::mt19937_64& rng) {
  static const char* kSurface[] = {"garlic", "Garlic", "the garlic", "bleach", "Bleach!", "lemon",
                                   "an onion", "onion", "sunlight", "salt"};
  static const char* kGold[] = {"garlic", "bleach", "lemon", "onion", "sunlight"};
  Instance in;
  in.yesno = rng() % 2 == 0;
  std::uniform_int_distribution<std::size_t> upto5(0, 5);
  if (in.yesno) {
    const auto yes_ev = distinct_ids(rng, 3), no_ev = distinct_ids(rng, 3);
    in.golds = {{"yes", yes_ev, no_ev}, {"no", no_ev, yes_ev}};
    const auto py = pick_ids(rng, 3), pn = pick_ids(rng, 3);
    if (rng() % 2) in.preds.push_back({"yes", py, pn});
    if (rng() % 2) in.preds.push_back({"no", pn, py});
  } else {
    const std::size_t n = 1 + upto5(rng) % 5;
    std::vector<std::string> answers(kGold, kGold + 5);
    std::shuffle(answers.begin(), answers.end(), rng);
    for (std::size_t i = 0; i < n; ++i) in.golds.push_back({answers[i], distinct_ids(rng, 3), distinct_ids(rng, 3)});
    const std::size_t m = upto5(rng);
    for (std::size_t i = 0; i < m; ++i) {
      in.preds.push_back({kSurface[rng() % 10], pick_ids(rng, 3), pick_ids(rng, 3)});
    }
  }
  const auto ranked = distinct_ids(rng, 8);
  double s = 10;
  for (const auto& id : ranked) in.ranked.push_back({id, s--});
  return in;
}

std::vector<oracle::Tuple> to_oracle(const std::vector<PredictedTuple>& v) {
  std::vector<oracle::Tuple> out;
  for (const auto& t : v) out.push_back({t.answer, t.supporting, t.refuting});
  return out;
}
std::vector<oracle::Tuple> to_oracle(const std::vector<GoldTuple>& v) {
  std::vector<oracle::Tuple> out;
  for (const auto& t : v) out.push_back({t.answer, t.supporting, t.refuting});
  return out;
}
std::vector<std::string> ids_of(const std::vector<RankedTweet>& v) {
  std::vector<std::string> out;
  for (const auto& r : v) out.push_back(r.tweet_id);
  return out;
}

Outcome metric_oracle() {
  std::mt19937_64 rng(20240601);
  std::size_t checks = 0, mismatches = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    const auto in = random_instance(rng);
    const auto op = to_oracle(in.preds), og = to_oracle(in.golds);
    const MatchMode mode = in.yesno ? MatchMode::YesNo : MatchMode::Entity;
    auto expect = [&](double got, double want, const std::string& what) {
      ++checks;
      if (got != want) {
        ++mismatches;
        if (first.empty()) first = "instance " + std::to_string(i) + " " + what;
      }
    };
    expect(f1_ans(in.preds, in.golds), oracle::answer_prf(op, og).f, "f1_ans");
    for (std::size_t e = 1; e <= 3; ++e) {
      expect(f1_contro_at_e(in.preds, in.golds, e, mode), oracle::contro_prf(op, og, e, in.yesno).f,
             "f1_contro@" + std::to_string(e));
    }
    const auto ranked = ids_of(in.ranked);
    for (std::size_t k = 1; k <= 10; ++k) {
      expect(hits_at_k(in.ranked, in.golds, k), oracle::hits(ranked, og, k), "hits@" + std::to_string(k));
      expect(mhits_at_k(in.ranked, in.golds, k), oracle::mhits(ranked, og, k), "mhits@" + std::to_string(k));
    }
  }
  const std::string detail = std::to_string(checks) + " checks, " + std::to_string(mismatches) + " mismatches";
  return {mismatches == 0 ? Outcome::Pass : Outcome::Fail, mismatches ? detail + "; first: " + first : detail};
}

// ---- BM25 on a 10-document toy corpus -----------------------------------

Outcome bm25_toy() {
  const std::vector<std::pair<std::string, std::string>> docs = {
      {"d01", "garlic cures covid"},
      {"d02", "garlic garlic garlic"},
      {"d03", "covid spreads through shoes"},
      {"d04", "shoes do not spread covid"},
      {"d05", "drink water to cure covid covid"},
      {"d06", "water is not a cure"},
      {"d07", "lemon water and garlic every morning cures everything says my aunt"},
      {"d08", "masks"},
      {"d09", "masks stop covid spread"},
      {"d10", "vitamin d and vitamin c"}};
  const auto idx = InvertedIndex::build(testsupport::make_corpus(docs));
  const std::vector<std::string> queries = {"garlic",          "covid",       "garlic cures covid",
                                            "shoes spread",    "water cure",  "vitamin vitamin",
                                            "masks covid",     "nothing here", "d and c",
                                            "covid covid garlic"};
  double worst = 0;
  std::size_t rank_errors = 0;
  for (const auto& q : queries) {
    const auto got = bm25_search(idx, q, 100);
    const auto want = oracle::bm25(docs, q, 0.9, 0.4);
    if (got.size() != want.size()) {
      ++rank_errors;
      continue;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].tweet_id != want[i].id) ++rank_errors;
      worst = std::max(worst, std::abs(got[i].score - want[i].score));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu queries, max |err| %.3g (tol %.0e), %zu rank errors", queries.size(),
                worst, kBm25Tol, rank_errors);
  return {worst <= kBm25Tol && rank_errors == 0 ? Outcome::Pass : Outcome::Fail, buf};
}

// ---- order properties ---------------------------------------------------

Outcome order_properties() {
  std::mt19937_64 rng(77);
  std::size_t violations = 0;
  for (int i = 0; i < 500; ++i) {
    const auto in = random_instance(rng);
    const MatchMode mode = in.yesno ? MatchMode::YesNo : MatchMode::Entity;
    const double ans = f1_ans(in.preds, in.golds);
    double prev = -1;
    for (std::size_t e = 1; e <= 4; ++e) {
      const double c = f1_contro_at_e(in.preds, in.golds, e, mode);
      if (c < 0 || c > ans || c < prev) ++violations;
      prev = c;
    }
    double ph = -1, pm = -1;
    for (std::size_t k = 1; k <= 10; ++k) {
      const double h = hits_at_k(in.ranked, in.golds, k);
      const double m = mhits_at_k(in.ranked, in.golds, k);
      if (m > h || h < ph || m < pm) ++violations;
      ph = h;
      pm = m;
    }
  }
  return {violations == 0 ? Outcome::Pass : Outcome::Fail,
          "500 cases, " + std::to_string(violations) + " violations"};
}

// ---- oracle end-to-end --------------------------------------------------

Outcome oracle_end_to_end() {
  const auto fx = testsupport::make_fixture(10, 10);
  const Bm25Retriever retriever(std::make_shared<const InvertedIndex>(InvertedIndex::build(fx.corpus)));
  const gold::GoldScorer scorer(fx.dataset);
  const gold::GoldExtractor extractor(fx.dataset);
  const Pipeline pipeline(fx.corpus, retriever, scorer, extractor, &fx.dataset);
  PipelineConfig cfg;
  cfg.mode = EvalMode::Intrinsic;
  cfg.e = 3;
  std::vector<Question> qs;
  for (const auto& rec : fx.dataset.records()) qs.push_back(rec.question);
  const auto preds = pipeline.run(qs, cfg);

  std::size_t verdict_errors = 0;
  for (const auto& p : preds) {
    if (p.qtype != QuestionType::YesNo) continue;
    const auto* rec = fx.dataset.find(p.question_id);
    const bool gold_yes = !rec->answers[0].supporting.empty();
    const bool gold_no = !rec->answers[1].supporting.empty();
    if (p.yesno.has(Verdict::Yes) != gold_yes || p.yesno.has(Verdict::No) != gold_no ||
        p.yesno.has(Verdict::NotSure)) {
      ++verdict_errors;
    }
  }
  const auto report = evaluate(fx.dataset, preds, {{1}, {100}});
  char buf[160];
  std::snprintf(buf, sizeof buf, "20 questions, entity F1_ans %.2f, yes/no F1_CONTRO@1 %.2f, %zu verdict errors",
                report.entity.f1_ans, report.yesno.f1_contro.at(1), verdict_errors);
  const bool ok = report.entity.questions == 10 && report.yesno.questions == 10 &&
                  report.entity.f1_ans == 100.0 && report.yesno.f1_contro.at(1) == 100.0 &&
                  verdict_errors == 0;
  return {ok ? Outcome::Pass : Outcome::Fail, buf};
}

// ---- verdict invariant --------------------------------------------------

// Random judgments; some seeds lean entirely neutral so NOT_SURE occurs.
class RandomScorer final : public StanceScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed), bias_(seed % 4) {}
  std::vector<StanceJudgment> classify_batch(const Claim& claim, std::span<const Tweet> tweets) const override {
    std::vector<StanceJudgment> out;
    for (const auto& t : tweets) {
      std::mt19937_64 rng(seed_ ^ std::hash<std::string>{}(claim.text + "|" + t.id));
      std::uniform_real_distribution<double> u(0, 1);
      StanceScores s{u(rng), u(rng), u(rng)};
      if (bias_ == 0) s[2] += 2;
      if (bias_ == 1) s[0] += 0.5;
      out.push_back(StanceJudgment::from_scores(s));
    }
    return out;
  }
  std::string name() const override { return "random"; }

 private:
  std::uint64_t seed_;
  std::uint64_t bias_;
};

Outcome verdict_invariant() {
  const auto fx = testsupport::make_fixture(0, 5, 20);
  const Bm25Retriever retriever(std::make_shared<const InvertedIndex>(InvertedIndex::build(fx.corpus)));
  const MockExtractor extractor;
  std::size_t outputs = 0, violations = 0, not_sure = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const RandomScorer scorer(seed);
    const Pipeline pipeline(fx.corpus, retriever, scorer, extractor);
    PipelineConfig cfg;
    cfg.k = 1 + seed % 12;
    cfg.m = 1;
    cfg.e = 1 + seed % 3;
    cfg.workers = 1;
    for (const auto& rec : fx.dataset.records()) {
      const auto p = pipeline.answer_yesno_question(rec.question, cfg);
      ++outputs;
      if (p.has(Verdict::NotSure)) ++not_sure;
      if (!verdicts_consistent(p)) ++violations;
    }
  }
  return {violations == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(outputs) + " predictions (" + std::to_string(not_sure) + " NOT_SURE), " +
              std::to_string(violations) + " violations"};
}

// ---- released data ------------------------------------------------------

Outcome released_bm25() {
  const char* dir = std::getenv("MYTHQA_DATA_DIR");
  if (!dir || !*dir) return {Outcome::Waived, "MYTHQA_DATA_DIR not set"};
  const std::filesystem::path root(dir);
  const auto corpus_path = root / "corpus.jsonl";
  const auto dataset_path = root / "dataset.json";
  if (!std::filesystem::exists(corpus_path) || !std::filesystem::exists(dataset_path)) {
    return {Outcome::Waived, "corpus.jsonl or dataset.json missing in " + root.string()};
  }
  const Corpus corpus = load_corpus(corpus_path);
  const Dataset dataset = load_dataset(dataset_path, corpus);
  const auto index = InvertedIndex::build(corpus);
  double hits = 0, mhits = 0;
  std::size_t n = 0;
  for (const auto& rec : dataset.records()) {
    const auto ranked = bm25_search(index, rec.question.text, 1000);
    const auto golds = gold_tuples(rec);
    hits += hits_at_k(ranked, golds, 1000);
    mhits += mhits_at_k(ranked, golds, 1000);
    ++n;
  }
  if (n == 0) return {Outcome::Fail, "dataset has no questions"};
  hits = 100.0 * hits / static_cast<double>(n);
  mhits = 100.0 * mhits / static_cast<double>(n);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu questions, H@1K %.2f (>= %.0f), MH@1K %.2f (%.2f +- %.1f)", n, hits,
                kHitsFloor, mhits, kMhitsTarget, kMhitsTol);
  const bool ok = hits >= kHitsFloor && std::abs(mhits - kMhitsTarget) <= kMhitsTol;
  return {ok ? Outcome::Pass : Outcome::Fail, buf};
}

}  // namespace

int main() {
  gate("metric-oracle-equivalence", 5.0, metric_oracle);
  gate("bm25-toy-correctness", 1.0, bm25_toy);
  gate("metric-order-properties", 0, order_properties);
  gate("oracle-end-to-end", 10.0, oracle_end_to_end);
  gate("yesno-verdict-invariant", 0, verdict_invariant);
  gate("released-data-bm25", 1800.0, released_bm25);
  std::printf("%s\n", failures == 0 ? "acceptance: all criteria met" : "acceptance: FAILED");
  return failures == 0 ? 0 : 1;
}
