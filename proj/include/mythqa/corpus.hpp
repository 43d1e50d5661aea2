#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mythqa {

struct Tweet {
  std::string id;
  std::string text;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

// Counters collected while ingesting a corpus file.
struct IngestReport {
  std::size_t lines = 0;
  std::size_t retweets = 0;
  std::size_t duplicates = 0;
  std::size_t empty = 0;
  std::size_t kept = 0;
};

// Immutable, deduplicated tweet collection. Positions are dense indices in
// file order and are what the retrieval indexes refer to.
class Corpus {
 public:
  Corpus() = default;

  // Builds a corpus from already-clean tweets. Throws ValidationError on a
  // duplicate id or duplicate normalized text.
  explicit Corpus(std::vector<Tweet> tweets);

  std::size_t size() const noexcept { return tweets_.size(); }
  bool empty() const noexcept { return tweets_.empty(); }

  const std::vector<Tweet>& tweets() const noexcept { return tweets_; }
  const Tweet& at(std::size_t pos) const { return tweets_.at(pos); }

  std::optional<std::size_t> position(std::string_view id) const;
  bool contains(std::string_view id) const { return position(id).has_value(); }
  const Tweet& by_id(std::string_view id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.tweets_ == b.tweets_; }

 private:
  std::vector<Tweet> tweets_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Streams the JSONL corpus format ({"id", "text"} per line), dropping
// retweets, tweets whose normalized text is empty, and normalized-text
// duplicates (first occurrence wins).
Corpus read_corpus(std::istream& in, IngestReport* report = nullptr);
Corpus load_corpus(const std::filesystem::path& path, IngestReport* report = nullptr);

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

enum class QuestionType { Entity, YesNo };

std::string_view to_string(QuestionType t);
QuestionType parse_question_type(std::string_view s);

struct Question {
  std::string id;
  std::string text;
  QuestionType qtype = QuestionType::Entity;
  std::string topic;
};

struct GoldAnswer {
  std::string text;
  std::vector<std::string> supporting;
  std::vector<std::string> refuting;
  std::vector<std::string> neutral;
};

struct QuestionRecord {
  Question question;
  std::vector<GoldAnswer> answers;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<QuestionRecord> records);

  const std::vector<QuestionRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const QuestionRecord* find(std::string_view question_id) const;
  const QuestionRecord& at(std::string_view question_id) const;

 private:
  std::vector<QuestionRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses and checks the structural invariants (qtype, answer count, yes/no
// answer set, supporting/refuting disjointness) without a corpus.
Dataset parse_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

// read_dataset plus resolution of every evidence id against the corpus.
Dataset load_dataset(const std::filesystem::path& path, const Corpus& corpus);
void validate_against(const Dataset& dataset, const Corpus& corpus);

void write_dataset(std::ostream& out, const Dataset& dataset);

struct CorpusStats {
  std::size_t entity_questions = 0;
  std::size_t yesno_questions = 0;
  std::size_t entity_answers = 0;
  std::size_t yesno_answers = 0;
  std::size_t supporting = 0;
  std::size_t refuting = 0;
  std::size_t neutral = 0;
  // Entity questions bucketed by answer count: 1, 2, 3, 4+.
  std::size_t entity_answer_histogram[4] = {0, 0, 0, 0};

  std::size_t questions() const { return entity_questions + yesno_questions; }
  std::size_t evidence() const { return supporting + refuting + neutral; }
  double avg_answers_entity() const;
  double avg_answers_yesno() const;
  double avg_answers() const;
  double supporting_pct() const;
  double refuting_pct() const;
  double neutral_pct() const;
};

CorpusStats corpus_stats(const Dataset& dataset);

}  // namespace mythqa
