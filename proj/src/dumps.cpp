#include "mythqa/dumps.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "mythqa/error.hpp"

namespace mythqa::dumps {

using nlohmann::json;

json to_json(const StanceEvidence& ev) {
  return {{"tweet_id", ev.tweet_id},
          {"label", to_string(ev.label)},
          {"stance_score", ev.stance_score},
          {"retrieval_score", ev.retrieval_score}};
}

namespace {

json evidence_list(const std::vector<StanceEvidence>& evs) {
  json arr = json::array();
  for (const auto& ev : evs) arr.push_back(to_json(ev));
  return arr;
}

json ranked_list(const std::vector<RankedTweet>& ranked) {
  json arr = json::array();
  for (const auto& r : ranked) arr.push_back({{"tweet_id", r.tweet_id}, {"score", r.score}});
  return arr;
}

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ParseError(where + ": " + msg);
}

std::vector<StanceEvidence> parse_evidence(const json& arr, StanceLabel default_label,
                                           const std::string& where) {
  if (!arr.is_array()) bad(where, "evidence must be a list");
  std::vector<StanceEvidence> out;
  for (const auto& v : arr) {
    StanceEvidence ev;
    ev.label = default_label;
    if (v.is_string()) {
      ev.tweet_id = v.get<std::string>();
    } else if (v.is_object() && v.contains("tweet_id") && v["tweet_id"].is_string()) {
      ev.tweet_id = v["tweet_id"].get<std::string>();
      if (v.contains("label") && v["label"].is_string()) {
        ev.label = parse_stance_label(v["label"].get<std::string>());
      }
      if (v.contains("stance_score") && v["stance_score"].is_number()) {
        ev.stance_score = v["stance_score"].get<double>();
      }
      if (v.contains("retrieval_score") && v["retrieval_score"].is_number()) {
        ev.retrieval_score = v["retrieval_score"].get<double>();
      }
    } else {
      bad(where, "evidence items must be tweet-id strings or {\"tweet_id\", ...} objects");
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<RankedTweet> parse_ranked(const json& arr, const std::string& where) {
  if (!arr.is_array()) bad(where, "\"retrieved\" must be a list");
  std::vector<RankedTweet> out;
  for (const auto& v : arr) {
    if (v.is_string()) {
      out.push_back({v.get<std::string>(), 0.0});
    } else if (v.is_object() && v.contains("tweet_id") && v["tweet_id"].is_string()) {
      double score = v.contains("score") && v["score"].is_number() ? v["score"].get<double>() : 0.0;
      out.push_back({v["tweet_id"].get<std::string>(), score});
    } else {
      bad(where, "retrieved items must be {\"tweet_id\", \"score\"} objects");
    }
  }
  return out;
}

template <class Fn>
void for_each_line(std::istream& in, const char* what, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(what) + " line " + std::to_string(lineno);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      bad(where, e.what());
    }
    if (!obj.is_object()) bad(where, "expected a JSON object");
    fn(obj, where);
  }
}

std::string question_id_of(const json& obj, const std::string& where) {
  if (!obj.contains("question_id") || !obj["question_id"].is_string()) {
    bad(where, "missing string field \"question_id\"");
  }
  return obj["question_id"].get<std::string>();
}

}  // namespace

json to_json(const QuestionPrediction& p) {
  json obj = {{"question_id", p.question_id}, {"qtype", to_string(p.qtype)}};
  if (p.qtype == QuestionType::Entity) {
    json preds = json::array();
    for (const auto& e : p.entity) {
      preds.push_back({{"answer", e.answer},
                       {"supporting", evidence_list(e.supporting)},
                       {"refuting", evidence_list(e.refuting)}});
    }
    obj["predictions"] = std::move(preds);
  } else {
    json verdicts = json::array();
    for (auto v : p.yesno.verdicts) verdicts.push_back(to_string(v));
    obj["predictions"] = {{"verdicts", std::move(verdicts)},
                          {"yes_evidence", evidence_list(p.yesno.yes_evidence)},
                          {"no_evidence", evidence_list(p.yesno.no_evidence)}};
  }
  if (!p.retrieved.empty()) obj["retrieved"] = ranked_list(p.retrieved);
  return obj;
}

QuestionPrediction prediction_from_json(const json& obj) {
  QuestionPrediction p;
  std::string where = "prediction";
  p.question_id = question_id_of(obj, where);
  where = "prediction for question '" + p.question_id + "'";
  if (!obj.contains("qtype") || !obj["qtype"].is_string()) bad(where, "missing string field \"qtype\"");
  try {
    p.qtype = parse_question_type(obj["qtype"].get<std::string>());
  } catch (const ParseError& e) {
    bad(where, e.what());
  }
  if (!obj.contains("predictions")) bad(where, "missing field \"predictions\"");
  const auto& preds = obj["predictions"];
  if (p.qtype == QuestionType::Entity) {
    if (!preds.is_array()) bad(where, "entity \"predictions\" must be a list");
    for (const auto& e : preds) {
      if (!e.is_object() || !e.contains("answer") || !e["answer"].is_string()) {
        bad(where, "entity predictions need a string \"answer\"");
      }
      EntityPrediction ep;
      ep.answer = e["answer"].get<std::string>();
      if (e.contains("supporting")) ep.supporting = parse_evidence(e["supporting"], StanceLabel::Supporting, where);
      if (e.contains("refuting")) ep.refuting = parse_evidence(e["refuting"], StanceLabel::Refuting, where);
      p.entity.push_back(std::move(ep));
    }
  } else {
    if (!preds.is_object()) bad(where, "yes/no \"predictions\" must be an object");
    std::vector<StanceEvidence> yes, no;
    if (preds.contains("yes_evidence")) yes = parse_evidence(preds["yes_evidence"], StanceLabel::Supporting, where);
    if (preds.contains("no_evidence")) no = parse_evidence(preds["no_evidence"], StanceLabel::Refuting, where);
    p.yesno = make_yesno_prediction(std::move(yes), std::move(no));
    if (preds.contains("verdicts")) {
      if (!preds["verdicts"].is_array()) bad(where, "\"verdicts\" must be a list");
      YesNoPrediction stated;
      for (const auto& v : preds["verdicts"]) {
        if (!v.is_string()) bad(where, "verdicts must be strings");
        stated.verdicts.push_back(parse_verdict(v.get<std::string>()));
      }
      stated.yes_evidence = p.yesno.yes_evidence;
      stated.no_evidence = p.yesno.no_evidence;
      if (!verdicts_consistent(stated)) bad(where, "verdicts disagree with the evidence lists");
    }
  }
  if (obj.contains("retrieved")) p.retrieved = parse_ranked(obj["retrieved"], where);
  return p;
}

void write_predictions(std::ostream& out, const std::vector<QuestionPrediction>& preds) {
  for (const auto& p : preds) out << to_json(p).dump() << '\n';
}

std::vector<QuestionPrediction> read_predictions(std::istream& in) {
  std::vector<QuestionPrediction> out;
  for_each_line(in, "predictions", [&](const json& obj, const std::string& where) {
    try {
      out.push_back(prediction_from_json(obj));
    } catch (const ParseError& e) {
      bad(where, e.what());
    }
  });
  return out;
}

std::vector<QuestionPrediction> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open predictions file " + path.string());
  return read_predictions(in);
}

void write_retrieval(std::ostream& out, const std::vector<QuestionPrediction>& preds) {
  for (const auto& p : preds) {
    out << json{{"question_id", p.question_id}, {"retrieved", ranked_list(p.retrieved)}}.dump()
        << '\n';
  }
}

std::map<std::string, std::vector<RankedTweet>> read_retrieval(std::istream& in) {
  std::map<std::string, std::vector<RankedTweet>> out;
  for_each_line(in, "retrieval", [&](const json& obj, const std::string& where) {
    const std::string qid = question_id_of(obj, where);
    if (!obj.contains("retrieved")) bad(where, "missing field \"retrieved\"");
    if (!out.emplace(qid, parse_ranked(obj["retrieved"], where)).second) {
      bad(where, "duplicate retrieval list for question '" + qid + "'");
    }
  });
  return out;
}

std::map<std::string, std::vector<RankedTweet>> load_retrieval(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open retrieval file " + path.string());
  return read_retrieval(in);
}

std::vector<metrics::StancePair> read_stance_pairs(std::istream& in) {
  std::vector<metrics::StancePair> out;
  for_each_line(in, "stance", [&](const json& obj, const std::string& where) {
    metrics::StancePair sp;
    sp.question_id = question_id_of(obj, where);
    for (const char* key : {"answer", "tweet_id", "label"}) {
      if (!obj.contains(key) || !obj[key].is_string()) {
        bad(where, std::string("missing string field \"") + key + "\"");
      }
    }
    sp.answer = obj["answer"].get<std::string>();
    sp.tweet_id = obj["tweet_id"].get<std::string>();
    try {
      sp.label = parse_stance_label(obj["label"].get<std::string>());
    } catch (const ParseError& e) {
      bad(where, e.what());
    }
    out.push_back(std::move(sp));
  });
  return out;
}

std::vector<metrics::StancePair> load_stance_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stance file " + path.string());
  return read_stance_pairs(in);
}

}  // namespace mythqa::dumps
