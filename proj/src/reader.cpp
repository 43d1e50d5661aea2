#include "mythqa/reader.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mythqa/error.hpp"
#include "mythqa/text.hpp"

namespace mythqa {

void ReaderConfig::validate() const {
  if (m == 0) throw InvalidArgument("reader: m must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("reader: lambda must lie in [0, 1]");
  if (max_answer_tokens == 0) throw InvalidArgument("reader: max_answer_tokens must be positive");
}

std::string normalize_answer(std::string_view text) {
  std::string stripped;
  stripped.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::next(text, pos);
    if (utf8::is_punct(cp)) continue;
    for (std::size_t i = here; i < pos; ++i) {
      stripped.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    }
  }
  auto words = split_whitespace(stripped);
  std::size_t first = 0;
  while (words.size() - first > 1 &&
         (words[first] == "a" || words[first] == "an" || words[first] == "the")) {
    ++first;
  }
  words.erase(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(first));
  return join(words, " ");
}

namespace {

struct Extracted {
  std::string norm;
  std::string display;
  double retrieval;
  double span;
  std::string tweet_id;
};

// Maps v into [0, 1] over [lo, hi]; a degenerate range maps everything to 1.
double min_max(double v, double lo, double hi) {
  if (!(hi > lo)) return 1.0;
  return (v - lo) / (hi - lo);
}

}  // namespace

std::vector<AnswerCandidate> aggregate_answers(const Question& question,
                                               const std::vector<RankedTweet>& ranked,
                                               const Corpus& corpus,
                                               const AnswerExtractor& extractor,
                                               const ReaderConfig& cfg,
                                               ReaderDiagnostics* diagnostics) {
  cfg.validate();
  ReaderDiagnostics diag;
  diag.tweets = ranked.size();
  std::vector<Extracted> found;
  for (const auto& hit : ranked) {
    const auto pos = corpus.position(hit.tweet_id);
    if (!pos) {
      ++diag.failed;
      continue;
    }
    std::optional<AnswerSpan> span;
    try {
      span = extractor.extract_one(question, corpus.at(*pos));
    } catch (const std::exception&) {
      ++diag.failed;
      continue;
    }
    if (!span) {
      ++diag.no_answer;
      continue;
    }
    if (split_whitespace(span->text).size() > cfg.max_answer_tokens) {
      ++diag.too_long;
      continue;
    }
    std::string norm = normalize_answer(span->text);
    if (norm.empty()) {
      ++diag.no_answer;
      continue;
    }
    found.push_back({std::move(norm), span->text, hit.score, span->span_score, hit.tweet_id});
  }
  if (diagnostics) *diagnostics = diag;
  if (found.empty()) return {};

  double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
  double slo = rlo, shi = -rlo;
  for (const auto& f : found) {
    rlo = std::min(rlo, f.retrieval);
    rhi = std::max(rhi, f.retrieval);
    slo = std::min(slo, f.span);
    shi = std::max(shi, f.span);
  }

  std::vector<AnswerCandidate> cands;
  std::unordered_map<std::string, std::size_t> by_norm;
  for (auto& f : found) {
    const double r = min_max(f.retrieval, rlo, rhi);
    const double s = min_max(f.span, slo, shi);
    const double combined =
        extractor.is_generative() ? r : cfg.lambda * r + (1.0 - cfg.lambda) * s;
    auto [it, inserted] = by_norm.emplace(f.norm, cands.size());
    if (inserted) {
      cands.push_back({f.norm, f.display, combined, {f.tweet_id}});
      continue;
    }
    auto& c = cands[it->second];
    if (combined > c.combined_score) {
      c.combined_score = combined;
      c.display_text = f.display;
    }
    c.source_tweet_ids.push_back(f.tweet_id);
  }
  std::sort(cands.begin(), cands.end(), [](const AnswerCandidate& a, const AnswerCandidate& b) {
    if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
    return a.answer_norm < b.answer_norm;
  });
  if (cands.size() > cfg.m) cands.resize(cfg.m);
  return cands;
}

void MockExtractor::add(std::string question_id, std::string tweet_id, AnswerSpan span) {
  table_[{std::move(question_id), std::move(tweet_id)}] = std::move(span);
}

std::optional<AnswerSpan> MockExtractor::extract_one(const Question& question,
                                                     const Tweet& tweet) const {
  auto it = table_.find({question.id, tweet.id});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

MockExtractor MockExtractor::read(std::istream& in, bool generative) {
  using nlohmann::json;
  MockExtractor ex(generative);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("fixture line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("question_id") || !obj["question_id"].is_string() ||
        !obj.contains("tweet_id") || !obj["tweet_id"].is_string() || !obj.contains("answer") ||
        !obj["answer"].is_string()) {
      throw ParseError("fixture line " + std::to_string(lineno) +
                       ": expected string fields question_id, tweet_id, answer");
    }
    double score = 1.0;
    if (obj.contains("score")) {
      if (!obj["score"].is_number()) {
        throw ParseError("fixture line " + std::to_string(lineno) + ": score must be a number");
      }
      score = obj["score"].get<double>();
    }
    ex.add(obj["question_id"].get<std::string>(), obj["tweet_id"].get<std::string>(),
           {obj["answer"].get<std::string>(), score});
  }
  return ex;
}

MockExtractor MockExtractor::load(const std::filesystem::path& path, bool generative) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture file " + path.string());
  return read(in, generative);
}

}  // namespace mythqa
