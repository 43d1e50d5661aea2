#include "mythqa/report.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace mythqa::metrics {

using nlohmann::json;

namespace {

json prf_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

json group_json(const GroupScores& g) {
  json obj = {{"questions", g.questions},
              {"f1_ans", g.f1_ans},
              {"prec_ans", g.prec_ans},
              {"rec_ans", g.rec_ans}};
  json contro = json::object();
  for (const auto& [e, v] : g.f1_contro) contro[std::to_string(e)] = v;
  obj["f1_contro"] = std::move(contro);
  if (g.retrieval_questions) {
    obj["retrieval_questions"] = g.retrieval_questions;
    json hits = json::object(), mhits = json::object();
    for (const auto& [k, v] : g.hits) hits[std::to_string(k)] = v;
    for (const auto& [k, v] : g.mhits) mhits[std::to_string(k)] = v;
    obj["hits"] = std::move(hits);
    obj["mhits"] = std::move(mhits);
  }
  return obj;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& r = rows[ri];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      if (i == 0) {
        out << r[i] << std::string(width[i] - r[i].size(), ' ');
      } else {
        out << std::string(width[i] - r[i].size(), ' ') << r[i];
      }
    }
    out << '\n';
    if (ri == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
}

}  // namespace

json to_json(const EvalReport& report) {
  json obj = {{"entity", group_json(report.entity)},
              {"yesno", group_json(report.yesno)},
              {"overall", group_json(report.overall)}};
  if (report.stance) {
    const auto& s = *report.stance;
    json classes = json::object();
    for (std::size_t c = 0; c < 3; ++c) {
      classes[std::string(to_string(static_cast<StanceLabel>(c)))] = prf_json(s.per_class[c]);
    }
    json confusion = json::array();
    for (const auto& row : s.confusion) confusion.push_back(row);
    obj["stance"] = {{"pairs", s.pairs},
                     {"skipped", report.stance_skipped},
                     {"macro", prf_json(s.macro)},
                     {"classes", std::move(classes)},
                     {"confusion", std::move(confusion)}};
  }
  return obj;
}

void print_report(std::ostream& out, const EvalReport& report) {
  const std::pair<const char*, const GroupScores*> groups[] = {
      {"Entity", &report.entity}, {"Yes/No", &report.yesno}, {"Overall", &report.overall}};

  if (report.overall.retrieval_questions) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"Question Type"};
    for (const auto& [k, _] : report.overall.hits) {
      header.push_back("MH@" + std::to_string(k));
      header.push_back("H@" + std::to_string(k));
    }
    rows.push_back(header);
    for (const auto& [name, g] : groups) {
      std::vector<std::string> row = {name};
      for (const auto& [k, v] : report.overall.hits) {
        (void)v;
        row.push_back(g->retrieval_questions ? fmt2(g->mhits.at(k)) : "-");
        row.push_back(g->retrieval_questions ? fmt2(g->hits.at(k)) : "-");
      }
      rows.push_back(row);
    }
    out << "Tweet retrieval\n";
    print_table(out, rows);
    out << '\n';
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Q Type", "#Q", "F1_ans"};
  for (const auto& [e, _] : report.overall.f1_contro) header.push_back("F1_CONTRO@" + std::to_string(e));
  rows.push_back(header);
  for (const auto& [name, g] : groups) {
    std::vector<std::string> row = {name, std::to_string(g->questions), fmt2(g->f1_ans)};
    for (const auto& [e, v] : g->f1_contro) {
      (void)e;
      row.push_back(fmt2(v));
    }
    rows.push_back(row);
  }
  out << "Answers and contradictory evidence\n";
  print_table(out, rows);

  if (report.stance) {
    const auto& s = *report.stance;
    std::vector<std::vector<std::string>> srows = {{"Class", "P", "R", "F"}};
    srows.push_back({"Macro Avg.", fmt2(s.macro.precision), fmt2(s.macro.recall), fmt2(s.macro.f1)});
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& p = s.per_class[c];
      srows.push_back({std::string(to_string(static_cast<StanceLabel>(c))), fmt2(p.precision),
                       fmt2(p.recall), fmt2(p.f1)});
    }
    out << "\nStance detection (" << s.pairs << " pairs)\n";
    print_table(out, srows);
  }
}

}  // namespace mythqa::metrics

namespace mythqa {

nlohmann::json to_json(const CorpusStats& s) {
  return {{"questions", s.questions()},
          {"entity_questions", s.entity_questions},
          {"yesno_questions", s.yesno_questions},
          {"avg_answers", s.avg_answers()},
          {"avg_answers_entity", s.avg_answers_entity()},
          {"avg_answers_yesno", s.avg_answers_yesno()},
          {"entity_answer_histogram",
           {{"1", s.entity_answer_histogram[0]},
            {"2", s.entity_answer_histogram[1]},
            {"3", s.entity_answer_histogram[2]},
            {"4+", s.entity_answer_histogram[3]}}},
          {"supporting", s.supporting},
          {"refuting", s.refuting},
          {"neutral", s.neutral},
          {"supporting_pct", s.supporting_pct()},
          {"refuting_pct", s.refuting_pct()},
          {"neutral_pct", s.neutral_pct()}};
}

nlohmann::json to_json(const IngestReport& r) {
  return {{"lines", r.lines},
          {"retweets", r.retweets},
          {"duplicates", r.duplicates},
          {"empty", r.empty},
          {"kept", r.kept}};
}

}  // namespace mythqa
