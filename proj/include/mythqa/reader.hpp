#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

struct AnswerSpan {
  std::string text;
  double span_score = 0.0;
};

// Reads one answer out of one tweet.
class AnswerExtractor {
 public:
  virtual ~AnswerExtractor() = default;
  virtual std::optional<AnswerSpan> extract_one(const Question& question,
                                                const Tweet& tweet) const = 0;
  // Generative readers have no comparable span score; candidates are then
  // ranked by retrieval score alone.
  virtual bool is_generative() const { return false; }
  virtual std::string name() const = 0;
};

struct AnswerCandidate {
  std::string answer_norm;
  std::string display_text;
  double combined_score = 0.0;
  std::vector<std::string> source_tweet_ids;
};

struct ReaderConfig {
  std::size_t m = 5;
  double lambda = 0.5;
  std::size_t max_answer_tokens = 5;

  void validate() const;
};

struct ReaderDiagnostics {
  std::size_t tweets = 0;
  std::size_t no_answer = 0;
  std::size_t too_long = 0;
  std::size_t failed = 0;
};

// Lowercase, punctuation removed, leading articles dropped, whitespace collapsed.
std::string normalize_answer(std::string_view text);

// One extraction per ranked tweet, min-max normalized score mixing, merge by
// normalized answer, top-m.
std::vector<AnswerCandidate> aggregate_answers(const Question& question,
                                               const std::vector<RankedTweet>& ranked,
                                               const Corpus& corpus,
                                               const AnswerExtractor& extractor,
                                               const ReaderConfig& cfg,
                                               ReaderDiagnostics* diagnostics = nullptr);

// Fixture-driven extractor keyed by (question id, tweet id).
class MockExtractor final : public AnswerExtractor {
 public:
  MockExtractor() = default;
  explicit MockExtractor(bool generative) : generative_(generative) {}

  // JSONL of {"question_id", "tweet_id", "answer", "score"}.
  static MockExtractor read(std::istream& in, bool generative = false);
  static MockExtractor load(const std::filesystem::path& path, bool generative = false);

  void add(std::string question_id, std::string tweet_id, AnswerSpan span);
  std::size_t size() const noexcept { return table_.size(); }

  std::optional<AnswerSpan> extract_one(const Question& question,
                                        const Tweet& tweet) const override;
  bool is_generative() const override { return generative_; }
  std::string name() const override { return "mock"; }

 private:
  std::map<std::pair<std::string, std::string>, AnswerSpan> table_;
  bool generative_ = false;
};

}  // namespace mythqa
