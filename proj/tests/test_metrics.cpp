#include <doctest.h>

#include <random>
#include <sstream>

#include "mythqa/dumps.hpp"
#include "mythqa/error.hpp"
#include "mythqa/metrics.hpp"
#include "mythqa/report.hpp"
#include "oracle/metrics_oracle.hpp"
#include "support.hpp"

using namespace mythqa;
using namespace mythqa::metrics;

namespace {

std::vector<RankedTweet> ranked(std::vector<std::string> ids) {
  std::vector<RankedTweet> out;
  double s = static_cast<double>(ids.size());
  for (auto& id : ids) out.push_back({std::move(id), s--});
  return out;
}

std::vector<oracle::Tuple> as_oracle(const std::vector<PredictedTuple>& v) {
  std::vector<oracle::Tuple> out;
  for (const auto& t : v) out.push_back({t.answer, t.supporting, t.refuting});
  return out;
}
std::vector<oracle::Tuple> as_oracle(const std::vector<GoldTuple>& v) {
  std::vector<oracle::Tuple> out;
  for (const auto& t : v) out.push_back({t.answer, t.supporting, t.refuting});
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("evidence_match") {
    const std::vector<std::string> none, t1 = {"t1"}, t12 = {"t1", "t2"}, t2 = {"t2"};
    CHECK(evidence_match(none, t1) == 0);
    CHECK(evidence_match(t1, t12) == 1);
    CHECK(evidence_match(t1, t2) == 0);
  }

  TEST_CASE("score_tuples examples") {
    const std::vector<GoldTuple> gold = {{"Shoes", {"s1", "s2"}, {"r1"}}};
    const auto b = score_tuples({{"shoes!", {"s2"}, {"x"}}}, gold, MatchMode::Entity);
    REQUIRE(b.size() == 1);
    CHECK(b[0].se == 1);
    CHECK(b[0].re == 0);
    CHECK(b[0].c == 0.5);
    const auto miss = score_tuples({{"boots", {"s1"}, {"r1"}}}, gold, MatchMode::Entity);
    CHECK(miss[0].se == 0);
    CHECK(miss[0].re == 0);
    CHECK(miss[0].c == 0.0);
    const auto yn = score_tuples({{"yes", {"s1"}, {"zz"}}}, {{"YES", {"s1"}, {"r1"}}}, MatchMode::YesNo);
    CHECK(yn[0].c == 1.0);
  }

  TEST_CASE("f1_from_correctness examples") {
    const std::vector<double> perfect = {1, 1}, two_thirds = {1, 1, 0}, none;
    auto r = f1_from_correctness(perfect, 2, 2);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    r = f1_from_correctness(two_thirds, 3, 3);
    CHECK(r.precision == doctest::Approx(2.0 / 3));
    CHECK(r.f1 == doctest::Approx(2.0 / 3));
    r = f1_from_correctness(none, 0, 3);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
    CHECK_THROWS_AS(f1_from_correctness(none, 0, 0), InvalidArgument);
  }

  TEST_CASE("f1_ans examples") {
    const std::vector<GoldTuple> gold = {{"a", {}, {}}, {"b", {}, {}}, {"c", {}, {}}};
    CHECK(f1_ans({{"a", {}, {}}, {"B", {}, {}}, {"the c", {}, {}}}, gold) == 100.0);
    CHECK(f1_ans({{"a", {}, {}}, {"b", {}, {}}, {"z", {}, {}}}, gold) == doctest::Approx(66.6667).epsilon(1e-5));
    CHECK(f1_ans({}, gold) == 0.0);
  }

  TEST_CASE("f1_contro_at_e truncation and oracle predictions") {
    const std::vector<GoldTuple> gold = {{"a", {"g1"}, {"g2"}}, {"b", {"g3"}, {"g4"}}};
    const std::vector<PredictedTuple> late = {{"a", {"x", "g1"}, {"y", "g2"}}, {"b", {"g3"}, {"g4"}}};
    // a: gold at rank 2 only, so at e = 1 contributes 0
    CHECK(f1_contro_at_e(late, gold, 1, MatchMode::Entity) == 50.0);
    CHECK(f1_contro_at_e(late, gold, 2, MatchMode::Entity) == 100.0);
    const std::vector<PredictedTuple> perfect = {{"a", {"g1"}, {"g2"}}, {"b", {"g3"}, {"g4"}}};
    CHECK(f1_contro_at_e(perfect, gold, 1, MatchMode::Entity) == 100.0);
  }

  TEST_CASE("mixed 2-question toy set equals the oracle") {
    const std::vector<GoldTuple> g1 = {{"masks", {"1", "2"}, {"3"}}, {"Sunlight", {"4"}, {"5"}}};
    const std::vector<PredictedTuple> p1 = {{"Masks", {"2", "9"}, {"8"}}, {"sunlight", {"7"}, {"5"}}, {"bleach", {"1"}, {}}};
    const std::vector<GoldTuple> g2 = {{"yes", {"11"}, {"12"}}, {"no", {"12"}, {"11"}}};
    const std::vector<PredictedTuple> p2 = {{"yes", {"13", "11"}, {"12"}}};
    for (std::size_t e : {1, 2, 3}) {
      CHECK(f1_contro_at_e(p1, g1, e, MatchMode::Entity) ==
            oracle::contro_prf(as_oracle(p1), as_oracle(g1), e, false).f);
      CHECK(f1_contro_at_e(p2, g2, e, MatchMode::YesNo) ==
            oracle::contro_prf(as_oracle(p2), as_oracle(g2), e, true).f);
    }
    // hand values: q1 c = [.5, .5, 0], m = 3, n = 2 -> P = 1/3, R = 1/2, F = 40
    CHECK(f1_contro_at_e(p1, g1, 1, MatchMode::Entity) == doctest::Approx(40.0));
    CHECK(f1_contro_at_e(p2, g2, 1, MatchMode::YesNo) == 0.0);
    CHECK(f1_contro_at_e(p2, g2, 2, MatchMode::YesNo) == doctest::Approx(200.0 / 3));
  }

  TEST_CASE("hits and mhits examples") {
    const std::vector<GoldTuple> gold = {{"a", {"g1"}, {"g2"}}, {"b", {"g3"}, {}}};
    CHECK(hits_at_k(ranked({"g1", "x"}), gold, 1) == 1);
    CHECK(hits_at_k(ranked({"x", "y"}), gold, 2) == 0);
    CHECK(hits_at_k(ranked({"x", "y", "g2"}), gold, 3) == 1);
    CHECK(hits_at_k(ranked({"x", "y", "g2"}), gold, 2) == 0);
    CHECK(mhits_at_k(ranked({"g2", "x"}), gold, 2) == 0.5);
    CHECK(mhits_at_k(ranked({"g2", "g3"}), gold, 2) == hits_at_k(ranked({"g2", "g3"}), gold, 2));
    CHECK(mhits_at_k({}, gold, 10) == 0.0);
    // neutral evidence is not relevant
    const std::vector<GoldTuple> only = {{"a", {}, {}}, {"b", {}, {}}};
    CHECK(hits_at_k(ranked({"n1"}), only, 1) == 0);
  }

  TEST_CASE("stance_prf examples") {
    using L = StanceLabel;
    const std::vector<L> gold = {L::Supporting, L::Supporting, L::Refuting, L::Refuting, L::Neutral, L::Neutral};
    const auto perfect = stance_prf(gold, gold);
    CHECK(perfect.macro.f1 == doctest::Approx(100.0));
    const std::vector<L> all_s(6, L::Supporting);
    const auto deg = stance_prf(all_s, gold);
    CHECK(deg.per_class[0].recall == 100.0);
    CHECK(deg.per_class[1].recall == 0.0);
    CHECK(deg.per_class[2].precision == 0.0);
    CHECK(deg.per_class[2].f1 == 0.0);

    // confusion by hand: pred = S R R N S N
    const std::vector<L> pred = {L::Supporting, L::Refuting, L::Refuting, L::Neutral, L::Supporting, L::Neutral};
    const auto r = stance_prf(pred, gold);
    CHECK(r.confusion[0][0] == 1);
    CHECK(r.confusion[0][1] == 1);
    CHECK(r.confusion[1][2] == 1);
    CHECK(r.confusion[2][0] == 1);
    // S: tp 1, pred 2, actual 2 -> 50/50/50; R: tp 1, pred 2, actual 2; N: tp 1, pred 2, actual 2
    for (int c = 0; c < 3; ++c) {
      CHECK(r.per_class[c].precision == doctest::Approx(50.0));
      CHECK(r.per_class[c].recall == doctest::Approx(50.0));
    }
    CHECK(r.macro.f1 == doctest::Approx(50.0));
    CHECK_THROWS_AS(stance_prf(pred, std::span<const L>(gold).first(3)), InvalidArgument);
  }

  TEST_CASE("yes/no f1_contro is symmetric under swapping S and R everywhere") {
    std::mt19937_64 rng(21);
    auto ids = [&](int n) {
      std::vector<std::string> v;
      for (int i = 0; i < n; ++i) v.push_back("t" + std::to_string(rng() % 6));
      return v;
    };
    for (int trial = 0; trial < 200; ++trial) {
      const auto ys = ids(rng() % 3), yr = ids(rng() % 3);
      // a symmetric yes/no instance: NO evidence mirrors YES evidence
      const std::vector<GoldTuple> gold = {{"yes", ys, yr}, {"no", yr, ys}};
      const auto ps = ids(rng() % 4), pr = ids(rng() % 4);
      const std::vector<PredictedTuple> pred = {{"yes", ps, pr}, {"no", pr, ps}};
      const std::vector<GoldTuple> gold_sw = {{"yes", yr, ys}, {"no", ys, yr}};
      const std::vector<PredictedTuple> pred_sw = {{"yes", pr, ps}, {"no", ps, pr}};
      for (std::size_t e : {1, 2, 3}) {
        CHECK(f1_contro_at_e(pred, gold, e, MatchMode::YesNo) ==
              f1_contro_at_e(pred_sw, gold_sw, e, MatchMode::YesNo));
      }
    }
  }

  TEST_CASE("predicted tuples from yes/no predictions") {
    QuestionPrediction p;
    p.question_id = "y";
    p.qtype = QuestionType::YesNo;
    p.yesno = make_yesno_prediction({{"1", StanceLabel::Supporting, 1, 1}}, {{"2", StanceLabel::Refuting, 1, 1}});
    const auto t = predicted_tuples(p);
    REQUIRE(t.size() == 2);
    CHECK(t[0].answer == "yes");
    CHECK(t[0].supporting == std::vector<std::string>{"1"});
    CHECK(t[0].refuting == std::vector<std::string>{"2"});
    CHECK(t[1].answer == "no");
    CHECK(t[1].supporting == std::vector<std::string>{"2"});
    p.yesno = make_yesno_prediction({}, {});
    CHECK(predicted_tuples(p).empty());
  }
}

TEST_SUITE("dumps") {
  const auto fx = testsupport::make_fixture(2, 2);

  std::vector<QuestionPrediction> gold_as_predictions() {
    std::vector<QuestionPrediction> out;
    for (const auto& rec : fx.dataset.records()) {
      QuestionPrediction p;
      p.question_id = rec.question.id;
      p.qtype = rec.question.qtype;
      auto ev = [](const std::vector<std::string>& ids, StanceLabel l) {
        std::vector<StanceEvidence> v;
        for (const auto& id : ids) v.push_back({id, l, 1.0, 0.5});
        return v;
      };
      if (rec.question.qtype == QuestionType::Entity) {
        for (const auto& a : rec.answers) {
          p.entity.push_back({a.text, ev(a.supporting, StanceLabel::Supporting), ev(a.refuting, StanceLabel::Refuting)});
        }
      } else {
        p.yesno = make_yesno_prediction(ev(rec.answers[0].supporting, StanceLabel::Supporting),
                                        ev(rec.answers[1].supporting, StanceLabel::Refuting));
      }
      p.retrieved = {{rec.answers[0].supporting[0], 3.0}};
      out.push_back(std::move(p));
    }
    return out;
  }

  TEST_CASE("prediction round-trip") {
    const auto preds = gold_as_predictions();
    std::stringstream buf;
    dumps::write_predictions(buf, preds);
    const auto back = dumps::read_predictions(buf);
    REQUIRE(back.size() == preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      CHECK(back[i].question_id == preds[i].question_id);
      CHECK(back[i].retrieved == preds[i].retrieved);
      const auto a = predicted_tuples(preds[i]), b = predicted_tuples(back[i]);
      REQUIRE(a.size() == b.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].answer == b[j].answer);
        CHECK(a[j].supporting == b[j].supporting);
        CHECK(a[j].refuting == b[j].refuting);
      }
    }
  }

  TEST_CASE("bare id evidence and schema errors name the record") {
    std::istringstream ok(R"({"question_id":"e0","qtype":"entity","predictions":[{"answer":"x","supporting":["1","2"],"refuting":[]}]})");
    const auto p = dumps::read_predictions(ok);
    CHECK(p.at(0).entity.at(0).supporting.at(1).tweet_id == "2");

    std::istringstream bad(R"({"question_id":"e0","qtype":"entity","predictions":[]}
{"question_id":"e1","qtype":"entity","predictions":{"verdicts":[]}}
)");
    try {
      dumps::read_predictions(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK((msg.find("e1") != std::string::npos || msg.find("line 2") != std::string::npos));
    }
    std::istringstream inconsistent(
        R"({"question_id":"y0","qtype":"yesno","predictions":{"verdicts":["YES"],"yes_evidence":[],"no_evidence":[]}})");
    CHECK_THROWS(dumps::read_predictions(inconsistent));
  }

  TEST_CASE("evaluate: gold as predictions, empty predictions, unknown ids") {
    const auto preds = gold_as_predictions();
    const auto report = evaluate(fx.dataset, preds, {});
    CHECK(report.entity.f1_ans == 100.0);
    CHECK(report.overall.f1_ans == 100.0);
    CHECK(report.overall.f1_contro.at(100) == 100.0);
    CHECK(report.overall.questions == 4);

    const auto zero = evaluate(fx.dataset, {}, {});
    CHECK(zero.overall.f1_ans == 0.0);
    CHECK(zero.overall.f1_contro.at(1) == 0.0);

    auto extra = preds;
    extra.push_back(preds[0]);
    CHECK_THROWS_AS(evaluate(fx.dataset, extra, {}), ValidationError);
    extra.back().question_id = "nope";
    CHECK_THROWS_AS(evaluate(fx.dataset, extra, {}), ValidationError);
  }

  TEST_CASE("evaluate with retrieval and stance dumps") {
    std::map<std::string, std::vector<RankedTweet>> retrieval;
    for (const auto& rec : fx.dataset.records()) retrieval[rec.question.id] = ranked({rec.answers[0].supporting[0]});
    std::vector<StancePair> pairs;
    const auto& rec = fx.dataset.records()[0];
    pairs.push_back({rec.question.id, rec.answers[0].text, rec.answers[0].supporting[0], StanceLabel::Supporting});
    pairs.push_back({rec.question.id, rec.answers[0].text, rec.answers[0].refuting[0], StanceLabel::Supporting});
    const auto report = evaluate(fx.dataset, gold_as_predictions(), {{1}, {1, 10}}, &retrieval, &pairs);
    CHECK(report.overall.hits.at(1) == 100.0);
    CHECK(report.overall.mhits.at(1) <= report.overall.hits.at(1));
    REQUIRE(report.stance);
    CHECK(report.stance->pairs == 2);
    CHECK(report.stance->per_class[0].precision == 50.0);

    const auto j = to_json(report);
    CHECK(j.contains("overall"));
    std::ostringstream text;
    print_report(text, report);
    CHECK(text.str().find("F1_CONTRO@1") != std::string::npos);
    CHECK(text.str().find("MH@10") != std::string::npos);
  }

  TEST_CASE("retrieval and stance dump io") {
    std::istringstream r(R"({"question_id":"e0","retrieved":[{"tweet_id":"1","score":2.5}]})");
    const auto m = dumps::read_retrieval(r);
    CHECK(m.at("e0").at(0).score == 2.5);
    std::istringstream s(R"({"question_id":"e0","answer":"x","tweet_id":"1","label":"refuting"})");
    const auto pairs = dumps::read_stance_pairs(s);
    CHECK(pairs.at(0).label == StanceLabel::Refuting);
    std::istringstream bad(R"({"question_id":"e0","answer":"x","tweet_id":"1","label":"angry"})");
    CHECK_THROWS_AS(dumps::read_stance_pairs(bad), ParseError);
  }
}
