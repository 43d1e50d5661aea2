#include "mythqa/stance.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "mythqa/error.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

Claim make_claim(const Question& question, std::string_view answer_text) {
  const std::string_view q = trim(question.text);
  const std::string_view a = trim(answer_text);
  if (q.empty()) throw InvalidArgument("cannot build a claim from an empty question");
  if (a.empty()) {
    throw InvalidArgument("cannot build a claim for question '" + question.id + "' with an empty answer");
  }
  Claim c;
  c.question_id = question.id;
  c.answer_text = std::string(a);
  c.text.reserve(q.size() + a.size() + 12);
  c.text.append(q).append(" Answer is ").append(a);
  const char last = a.back();
  if (last != '.' && last != '!' && last != '?') c.text.push_back('.');
  return c;
}

std::string_view to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::Supporting: return "supporting";
    case StanceLabel::Refuting: return "refuting";
    case StanceLabel::Neutral: return "neutral";
  }
  return "neutral";
}

StanceLabel parse_stance_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "supporting" || lower == "support" || lower == "supports") return StanceLabel::Supporting;
  if (lower == "refuting" || lower == "refute" || lower == "refutes") return StanceLabel::Refuting;
  if (lower == "neutral") return StanceLabel::Neutral;
  throw ParseError("unknown stance label '" + std::string(s) + "'");
}

StanceLabel map_nli_label(NliLabel nli) {
  switch (nli) {
    case NliLabel::Entailment: return StanceLabel::Supporting;
    case NliLabel::Contradiction: return StanceLabel::Refuting;
    case NliLabel::Neutral: return StanceLabel::Neutral;
  }
  return StanceLabel::Neutral;
}

NliLabel parse_nli_label(std::string_view s) {
  if (s == "entailment") return NliLabel::Entailment;
  if (s == "neutral") return NliLabel::Neutral;
  if (s == "contradiction") return NliLabel::Contradiction;
  throw ParseError("unknown NLI label '" + std::string(s) + "'");
}

StanceLabel argmax_label(const StanceScores& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<StanceLabel>(best);
}

double token_jaccard(std::string_view a, std::string_view b) {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  std::unordered_set<std::string> sa(ta.begin(), ta.end());
  std::unordered_set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

LexicalBaselineScorer::LexicalBaselineScorer(LexicalBaselineConfig config)
    : config_(std::move(config)) {
  for (const auto& cue : config_.cues) cue_tokens_.push_back(tokenize(cue));
}

StanceJudgment LexicalBaselineScorer::classify(const Claim& claim, const Tweet& tweet) const {
  const double j = token_jaccard(claim.text, tweet.text);
  StanceJudgment out;
  out.scores = {0.0, 0.0, 0.0};
  if (j < config_.threshold) {
    out.label = StanceLabel::Neutral;
    out.scores[static_cast<std::size_t>(StanceLabel::Neutral)] = 1.0 - j;
    return out;
  }
  const auto terms = tokenize(tweet.text);
  const bool cued = std::any_of(cue_tokens_.begin(), cue_tokens_.end(),
                                [&](const auto& cue) { return contains_run(terms, cue); });
  out.label = cued ? StanceLabel::Refuting : StanceLabel::Supporting;
  out.scores[static_cast<std::size_t>(out.label)] = j;
  return out;
}

std::vector<StanceJudgment> LexicalBaselineScorer::classify_batch(
    const Claim& claim, std::span<const Tweet> tweets) const {
  std::vector<StanceJudgment> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) out.push_back(classify(claim, t));
  return out;
}

}  // namespace mythqa
