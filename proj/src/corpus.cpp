#include "mythqa/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mythqa/error.hpp"
#include "mythqa/reader.hpp"
#include "mythqa/text.hpp"

namespace mythqa {

using nlohmann::json;

Corpus::Corpus(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
  index_.reserve(tweets_.size());
  std::unordered_set<std::string> seen_text;
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    if (!index_.emplace(tweets_[i].id, i).second) {
      throw ValidationError("duplicate tweet id '" + tweets_[i].id + "'");
    }
    if (!seen_text.insert(normalize_text(tweets_[i].text)).second) {
      throw ValidationError("duplicate normalized text for tweet '" + tweets_[i].id + "'");
    }
  }
}

std::optional<std::size_t> Corpus::position(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Tweet& Corpus::by_id(std::string_view id) const {
  auto pos = position(id);
  if (!pos) throw InvalidArgument("unknown tweet id '" + std::string(id) + "'");
  return tweets_[*pos];
}

Corpus read_corpus(std::istream& in, IngestReport* report) {
  IngestReport local;
  std::vector<Tweet> kept;
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> texts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++local.lines;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw ParseError("corpus line " + std::to_string(lineno) +
                       ": expected string fields \"id\" and \"text\"");
    }
    Tweet tweet{obj["id"].get<std::string>(), flatten_newlines(obj["text"].get<std::string>())};
    if (!ids.insert(tweet.id).second) {
      throw ValidationError("corpus line " + std::to_string(lineno) + ": duplicate tweet id '" +
                            tweet.id + "'");
    }
    if (is_retweet(tweet.text)) {
      ++local.retweets;
      continue;
    }
    std::string norm = normalize_text(tweet.text);
    if (norm.empty()) {
      ++local.empty;
      continue;
    }
    if (!texts.insert(std::move(norm)).second) {
      ++local.duplicates;
      continue;
    }
    kept.push_back(std::move(tweet));
  }
  local.kept = kept.size();
  if (report) *report = local;
  return Corpus(std::move(kept));
}

Corpus load_corpus(const std::filesystem::path& path, IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file " + path.string());
  try {
    return read_corpus(in, report);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& t : corpus.tweets()) {
    out << json{{"id", t.id}, {"text", t.text}}.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_corpus(out, corpus);
}

std::string_view to_string(QuestionType t) {
  return t == QuestionType::Entity ? "entity" : "yesno";
}

QuestionType parse_question_type(std::string_view s) {
  if (s == "entity") return QuestionType::Entity;
  if (s == "yesno") return QuestionType::YesNo;
  throw ParseError("unknown qtype '" + std::string(s) + "' (expected entity or yesno)");
}

Dataset::Dataset(std::vector<QuestionRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].question.id, i).second) {
      throw ValidationError("duplicate question id '" + records_[i].question.id + "'");
    }
  }
}

const QuestionRecord* Dataset::find(std::string_view question_id) const {
  auto it = index_.find(std::string(question_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const QuestionRecord& Dataset::at(std::string_view question_id) const {
  const auto* rec = find(question_id);
  if (!rec) throw InvalidArgument("unknown question id '" + std::string(question_id) + "'");
  return *rec;
}

namespace {

std::vector<std::string> id_list(const json& ans, const char* key, const std::string& where) {
  std::vector<std::string> ids;
  if (!ans.contains(key)) return ids;
  const auto& arr = ans[key];
  if (!arr.is_array()) throw ParseError(where + ": \"" + key + "\" must be a list");
  std::unordered_set<std::string> seen;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ParseError(where + ": tweet ids must be strings");
    auto id = v.get<std::string>();
    if (seen.insert(id).second) ids.push_back(std::move(id));
  }
  return ids;
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw ParseError(where + ": missing string field \"" + key + "\"");
  }
  return obj[key].get<std::string>();
}

void check_record(const QuestionRecord& rec) {
  const auto& q = rec.question;
  if (q.text.empty()) throw ValidationError("question '" + q.id + "': empty text");
  if (rec.answers.size() < 2) {
    throw ValidationError("question '" + q.id + "': needs at least 2 gold answers, has " +
                          std::to_string(rec.answers.size()));
  }
  if (q.qtype == QuestionType::YesNo) {
    std::vector<std::string> norms;
    for (const auto& a : rec.answers) norms.push_back(normalize_answer(a.text));
    std::sort(norms.begin(), norms.end());
    if (norms != std::vector<std::string>{"no", "yes"}) {
      throw ValidationError("question '" + q.id + "': yes/no questions need exactly the answers YES and NO");
    }
  }
  for (const auto& a : rec.answers) {
    if (a.text.empty()) throw ValidationError("question '" + q.id + "': empty answer text");
    std::unordered_set<std::string> sup(a.supporting.begin(), a.supporting.end());
    for (const auto& id : a.refuting) {
      if (sup.count(id)) {
        throw ValidationError("question '" + q.id + "', answer '" + a.text + "': tweet '" + id +
                              "' is both supporting and refuting");
      }
    }
  }
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dataset: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("dataset: top level must be a list of questions");
  std::vector<QuestionRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    std::string where = "dataset record " + std::to_string(i);
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    QuestionRecord rec;
    rec.question.id = required_string(obj, "id", where);
    where = "question '" + rec.question.id + "'";
    rec.question.text = required_string(obj, "text", where);
    rec.question.qtype = parse_question_type(required_string(obj, "qtype", where));
    if (obj.contains("topic") && obj["topic"].is_string()) {
      rec.question.topic = obj["topic"].get<std::string>();
    }
    if (!obj.contains("answers") || !obj["answers"].is_array()) {
      throw ParseError(where + ": missing list field \"answers\"");
    }
    for (const auto& a : obj["answers"]) {
      if (!a.is_object()) throw ParseError(where + ": answers must be objects");
      GoldAnswer g;
      g.text = required_string(a, "text", where);
      const std::string awhere = where + ", answer '" + g.text + "'";
      g.supporting = id_list(a, "supporting", awhere);
      g.refuting = id_list(a, "refuting", awhere);
      g.neutral = id_list(a, "neutral", awhere);
      rec.answers.push_back(std::move(g));
    }
    check_record(rec);
    records.push_back(std::move(rec));
  }
  return Dataset(std::move(records));
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file " + path.string());
  return parse_dataset(in);
}

void validate_against(const Dataset& dataset, const Corpus& corpus) {
  for (const auto& rec : dataset.records()) {
    for (const auto& a : rec.answers) {
      for (const auto* ids : {&a.supporting, &a.refuting, &a.neutral}) {
        for (const auto& id : *ids) {
          if (!corpus.contains(id)) {
            throw ValidationError("question '" + rec.question.id + "': evidence tweet '" + id +
                                  "' is not in the corpus");
          }
        }
      }
    }
  }
}

Dataset load_dataset(const std::filesystem::path& path, const Corpus& corpus) {
  Dataset ds = read_dataset(path);
  validate_against(ds, corpus);
  return ds;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  json doc = json::array();
  for (const auto& rec : dataset.records()) {
    json answers = json::array();
    for (const auto& a : rec.answers) {
      answers.push_back({{"text", a.text},
                         {"supporting", a.supporting},
                         {"refuting", a.refuting},
                         {"neutral", a.neutral}});
    }
    doc.push_back({{"id", rec.question.id},
                   {"text", rec.question.text},
                   {"qtype", to_string(rec.question.qtype)},
                   {"topic", rec.question.topic},
                   {"answers", std::move(answers)}});
  }
  out << doc.dump(1) << '\n';
}

namespace {
double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; }
}  // namespace

double CorpusStats::avg_answers_entity() const { return ratio(entity_answers, entity_questions); }
double CorpusStats::avg_answers_yesno() const { return ratio(yesno_answers, yesno_questions); }
double CorpusStats::avg_answers() const {
  return ratio(entity_answers + yesno_answers, questions());
}
double CorpusStats::supporting_pct() const { return 100.0 * ratio(supporting, evidence()); }
double CorpusStats::refuting_pct() const { return 100.0 * ratio(refuting, evidence()); }
double CorpusStats::neutral_pct() const { return 100.0 * ratio(neutral, evidence()); }

CorpusStats corpus_stats(const Dataset& dataset) {
  CorpusStats s;
  for (const auto& rec : dataset.records()) {
    const std::size_t n = rec.answers.size();
    if (rec.question.qtype == QuestionType::Entity) {
      ++s.entity_questions;
      s.entity_answers += n;
      if (n > 0) ++s.entity_answer_histogram[std::min<std::size_t>(n, 4) - 1];
    } else {
      ++s.yesno_questions;
      s.yesno_answers += n;
    }
    for (const auto& a : rec.answers) {
      s.supporting += a.supporting.size();
      s.refuting += a.refuting.size();
      s.neutral += a.neutral.size();
    }
  }
  return s;
}

}  // namespace mythqa
