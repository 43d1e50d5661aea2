#include "mythqa/metrics.hpp"

#include <algorithm>
#include <unordered_set>

#include "mythqa/error.hpp"
#include "mythqa/reader.hpp"

namespace mythqa::metrics {

int evidence_match(std::span<const std::string> predicted, std::span<const std::string> gold) {
  if (predicted.empty() || gold.empty()) return 0;
  std::unordered_set<std::string_view> g(gold.begin(), gold.end());
  for (const auto& id : predicted) {
    if (g.count(id)) return 1;
  }
  return 0;
}

AnswerMatchBreakdown score_tuples(const std::vector<PredictedTuple>& preds,
                                  const std::vector<GoldTuple>& golds, MatchMode mode,
                                  EvidenceTest test) {
  std::vector<std::string> gold_norm;
  gold_norm.reserve(golds.size());
  for (const auto& g : golds) gold_norm.push_back(normalize_answer(g.answer));

  AnswerMatchBreakdown out;
  out.reserve(preds.size());
  for (const auto& p : preds) {
    const std::string a = normalize_answer(p.answer);
    TupleScore s;
    for (std::size_t j = 0; j < golds.size(); ++j) {
      if (a != gold_norm[j]) continue;
      const int fs = test == EvidenceTest::Ignore ? 1 : evidence_match(p.supporting, golds[j].supporting);
      const int fr = test == EvidenceTest::Ignore ? 1 : evidence_match(p.refuting, golds[j].refuting);
      s.se = std::max(s.se, fs);
      s.re = std::max(s.re, fr);
    }
    s.c = mode == MatchMode::Entity ? (s.se + s.re) / 2.0 : static_cast<double>(s.se);
    out.push_back(s);
  }
  return out;
}

PRF f1_from_correctness(std::span<const double> c, std::size_t m, std::size_t n) {
  if (n == 0) throw InvalidArgument("f1: gold answer count must be positive");
  double sum = 0.0;
  for (double v : c) sum += v;
  PRF r;
  r.precision = m == 0 ? 0.0 : sum / static_cast<double>(m);
  r.recall = sum / static_cast<double>(n);
  const double denom = r.precision + r.recall;
  r.f1 = denom == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / denom;
  return r;
}

namespace {

PRF as_percent(PRF r) { return {100.0 * r.precision, 100.0 * r.recall, 100.0 * r.f1}; }

PRF prf_of(const AnswerMatchBreakdown& b, std::size_t n) {
  std::vector<double> c;
  c.reserve(b.size());
  for (const auto& s : b) c.push_back(s.c);
  return as_percent(f1_from_correctness(c, b.size(), n));
}

std::vector<PredictedTuple> truncate_evidence(const std::vector<PredictedTuple>& preds,
                                              std::size_t e) {
  std::vector<PredictedTuple> out = preds;
  for (auto& p : out) {
    if (p.supporting.size() > e) p.supporting.resize(e);
    if (p.refuting.size() > e) p.refuting.resize(e);
  }
  return out;
}

}  // namespace

PRF answer_prf(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds) {
  return prf_of(score_tuples(preds, golds, MatchMode::Entity, EvidenceTest::Ignore), golds.size());
}

double f1_ans(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds) {
  return answer_prf(preds, golds).f1;
}

PRF contro_prf_at_e(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds,
                    std::size_t e, MatchMode mode) {
  return prf_of(score_tuples(truncate_evidence(preds, e), golds, mode, EvidenceTest::Overlap),
                golds.size());
}

double f1_contro_at_e(const std::vector<PredictedTuple>& preds,
                      const std::vector<GoldTuple>& golds, std::size_t e, MatchMode mode) {
  return contro_prf_at_e(preds, golds, e, mode).f1;
}

namespace {

// Number of gold answers with at least one supporting/refuting tweet in the top k.
std::size_t answers_covered(const std::vector<RankedTweet>& retrieved,
                            const std::vector<GoldTuple>& golds, std::size_t k) {
  std::unordered_set<std::string_view> top;
  for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i) top.insert(retrieved[i].tweet_id);
  std::size_t covered = 0;
  for (const auto& g : golds) {
    auto in_top = [&](const std::string& id) { return top.count(id) > 0; };
    if (std::any_of(g.supporting.begin(), g.supporting.end(), in_top) ||
        std::any_of(g.refuting.begin(), g.refuting.end(), in_top)) {
      ++covered;
    }
  }
  return covered;
}

}  // namespace

int hits_at_k(const std::vector<RankedTweet>& retrieved, const std::vector<GoldTuple>& golds,
              std::size_t k) {
  return answers_covered(retrieved, golds, k) > 0 ? 1 : 0;
}

double mhits_at_k(const std::vector<RankedTweet>& retrieved, const std::vector<GoldTuple>& golds,
                  std::size_t k) {
  if (golds.empty()) throw InvalidArgument("mhits: gold answer count must be positive");
  const std::size_t covered = answers_covered(retrieved, golds, k);
  const int hits = covered > 0 ? 1 : 0;
  return hits * static_cast<double>(covered) / static_cast<double>(golds.size());
}

StanceReport stance_prf(std::span<const StanceLabel> predicted, std::span<const StanceLabel> gold) {
  if (predicted.size() != gold.size()) {
    throw InvalidArgument("stance_prf: " + std::to_string(predicted.size()) + " predictions for " +
                          std::to_string(gold.size()) + " gold labels");
  }
  StanceReport r;
  r.pairs = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.confusion[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(predicted[i])];
  }
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t tp = r.confusion[c][c], pred = 0, actual = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      pred += r.confusion[o][c];
      actual += r.confusion[c][o];
    }
    PRF& p = r.per_class[c];
    p.precision = pred == 0 ? 0.0 : 100.0 * tp / pred;
    p.recall = actual == 0 ? 0.0 : 100.0 * tp / actual;
    p.f1 = p.precision + p.recall == 0.0 ? 0.0
                                          : 2.0 * p.precision * p.recall / (p.precision + p.recall);
    r.macro.precision += p.precision / 3.0;
    r.macro.recall += p.recall / 3.0;
    r.macro.f1 += p.f1 / 3.0;
  }
  return r;
}

std::vector<GoldTuple> gold_tuples(const QuestionRecord& record) {
  std::vector<GoldTuple> out;
  out.reserve(record.answers.size());
  for (const auto& a : record.answers) out.push_back({a.text, a.supporting, a.refuting});
  return out;
}

namespace {

std::vector<std::string> ids_of(const std::vector<StanceEvidence>& ev) {
  std::vector<std::string> out;
  out.reserve(ev.size());
  for (const auto& x : ev) out.push_back(x.tweet_id);
  return out;
}

}  // namespace

std::vector<PredictedTuple> predicted_tuples(const QuestionPrediction& prediction) {
  std::vector<PredictedTuple> out;
  if (prediction.qtype == QuestionType::Entity) {
    for (const auto& p : prediction.entity) {
      out.push_back({p.answer, ids_of(p.supporting), ids_of(p.refuting)});
    }
    return out;
  }
  const auto& y = prediction.yesno;
  if (y.has(Verdict::Yes)) out.push_back({"yes", ids_of(y.yes_evidence), ids_of(y.no_evidence)});
  if (y.has(Verdict::No)) out.push_back({"no", ids_of(y.no_evidence), ids_of(y.yes_evidence)});
  return out;
}

namespace {

struct Accum {
  std::size_t questions = 0;
  double f1 = 0, prec = 0, rec = 0;
  std::map<std::size_t, double> contro;
  std::size_t retrieval_questions = 0;
  std::map<std::size_t, double> hits, mhits;

  void add(const Accum& o) {
    questions += o.questions;
    f1 += o.f1;
    prec += o.prec;
    rec += o.rec;
    for (auto& [e, v] : o.contro) contro[e] += v;
    retrieval_questions += o.retrieval_questions;
    for (auto& [k, v] : o.hits) hits[k] += v;
    for (auto& [k, v] : o.mhits) mhits[k] += v;
  }

  GroupScores finish(const EvalOptions& opt) const {
    GroupScores g;
    g.questions = questions;
    const double nq = questions ? static_cast<double>(questions) : 1.0;
    g.f1_ans = f1 / nq;
    g.prec_ans = prec / nq;
    g.rec_ans = rec / nq;
    for (auto e : opt.e_values) {
      auto it = contro.find(e);
      g.f1_contro[e] = it == contro.end() ? 0.0 : it->second / nq;
    }
    g.retrieval_questions = retrieval_questions;
    if (retrieval_questions) {
      const double nr = static_cast<double>(retrieval_questions);
      for (auto k : opt.k_values) {
        g.hits[k] = 100.0 * hits.at(k) / nr;
        g.mhits[k] = 100.0 * mhits.at(k) / nr;
      }
    }
    return g;
  }
};

}  // namespace

EvalReport evaluate(const Dataset& dataset, const std::vector<QuestionPrediction>& predictions,
                    const EvalOptions& options,
                    const std::map<std::string, std::vector<RankedTweet>>* retrieval,
                    const std::vector<StancePair>* stance) {
  std::map<std::string, const QuestionPrediction*> by_id;
  for (const auto& p : predictions) {
    const auto* rec = dataset.find(p.question_id);
    if (!rec) throw ValidationError("prediction for unknown question '" + p.question_id + "'");
    if (rec->question.qtype != p.qtype) {
      throw ValidationError("prediction for question '" + p.question_id + "' has qtype " +
                            std::string(to_string(p.qtype)) + ", dataset says " +
                            std::string(to_string(rec->question.qtype)));
    }
    if (!by_id.emplace(p.question_id, &p).second) {
      throw ValidationError("duplicate prediction for question '" + p.question_id + "'");
    }
  }
  if (retrieval) {
    for (const auto& [qid, _] : *retrieval) {
      if (!dataset.find(qid)) throw ValidationError("retrieval list for unknown question '" + qid + "'");
    }
  }

  Accum entity, yesno;
  for (const auto& rec : dataset.records()) {
    const bool is_entity = rec.question.qtype == QuestionType::Entity;
    Accum& acc = is_entity ? entity : yesno;
    const MatchMode mode = is_entity ? MatchMode::Entity : MatchMode::YesNo;
    const auto golds = gold_tuples(rec);
    std::vector<PredictedTuple> preds;
    if (auto it = by_id.find(rec.question.id); it != by_id.end()) preds = predicted_tuples(*it->second);
    ++acc.questions;
    const PRF ans = answer_prf(preds, golds);
    acc.f1 += ans.f1;
    acc.prec += ans.precision;
    acc.rec += ans.recall;
    for (auto e : options.e_values) acc.contro[e] += f1_contro_at_e(preds, golds, e, mode);
    if (retrieval) {
      auto it = retrieval->find(rec.question.id);
      if (it != retrieval->end()) {
        ++acc.retrieval_questions;
        for (auto k : options.k_values) {
          acc.hits[k] += hits_at_k(it->second, golds, k);
          acc.mhits[k] += mhits_at_k(it->second, golds, k);
        }
      }
    }
  }
  for (auto k : options.k_values) {
    entity.hits[k] += 0;
    entity.mhits[k] += 0;
    yesno.hits[k] += 0;
    yesno.mhits[k] += 0;
  }
  Accum overall;
  overall.add(entity);
  overall.add(yesno);

  EvalReport report;
  report.entity = entity.finish(options);
  report.yesno = yesno.finish(options);
  report.overall = overall.finish(options);

  if (stance) {
    std::vector<StanceLabel> pred, gold;
    for (const auto& pair : *stance) {
      const auto* rec = dataset.find(pair.question_id);
      if (!rec) throw ValidationError("stance pair for unknown question '" + pair.question_id + "'");
      const std::string norm = normalize_answer(pair.answer);
      std::optional<StanceLabel> g;
      for (const auto& a : rec->answers) {
        if (normalize_answer(a.text) != norm) continue;
        auto has = [&](const std::vector<std::string>& v) {
          return std::find(v.begin(), v.end(), pair.tweet_id) != v.end();
        };
        if (has(a.supporting)) g = StanceLabel::Supporting;
        else if (has(a.refuting)) g = StanceLabel::Refuting;
        else if (has(a.neutral)) g = StanceLabel::Neutral;
        break;
      }
      if (!g) {
        ++report.stance_skipped;
        continue;
      }
      pred.push_back(pair.label);
      gold.push_back(*g);
    }
    report.stance = stance_prf(pred, gold);
  }
  return report;
}

}  // namespace mythqa::metrics
