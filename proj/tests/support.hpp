#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mythqa/corpus.hpp"

namespace testsupport {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("mythqa-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline mythqa::Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::vector<mythqa::Tweet> tweets;
  for (const auto& [id, text] : rows) tweets.push_back({id, text});
  return mythqa::Corpus(std::move(tweets));
}

// A dataset over its own corpus where every annotated tweet mentions its
// question's topic word and its answer.
struct Fixture {
  mythqa::Corpus corpus;
  mythqa::Dataset dataset;
};

// `entity` questions with 2 or 3 answers (2 supporting, 1 refuting, 1 neutral
// tweet each) and `yesno` questions with evidence on both sides, plus
// `distractors` unrelated tweets.
inline Fixture make_fixture(std::size_t entity, std::size_t yesno, std::size_t distractors = 10) {
  std::vector<mythqa::Tweet> tweets;
  std::vector<mythqa::QuestionRecord> records;
  std::size_t next_id = 1000;
  auto add = [&](std::string text) {
    const std::string id = std::to_string(next_id++);
    tweets.push_back({id, std::move(text)});
    return id;
  };
  static const char* kThings[] = {"garlic", "bleach", "lemon", "onion", "sunlight",
                                  "vinegar", "ginger", "honey", "salt", "tea"};
  for (std::size_t q = 0; q < entity; ++q) {
    const std::string topic = "topic" + std::to_string(q) + "x";
    mythqa::QuestionRecord rec;
    rec.question = {"e" + std::to_string(q), "What cures " + topic + "?",
                    mythqa::QuestionType::Entity, topic};
    const std::size_t nans = 2 + q % 2;
    for (std::size_t a = 0; a < nans; ++a) {
      const std::string thing = std::string(kThings[(q + a) % 10]) + std::to_string(q);
      mythqa::GoldAnswer g;
      g.text = thing;
      g.supporting.push_back(add(thing + " cures " + topic + " says my doctor"));
      g.supporting.push_back(add("I took " + thing + " and it cures " + topic + " fast"));
      g.refuting.push_back(add("No evidence that " + thing + " cures " + topic + ", it is a myth"));
      g.neutral.push_back(add("Reading about " + thing + " and " + topic + " today"));
      rec.answers.push_back(std::move(g));
    }
    records.push_back(std::move(rec));
  }
  for (std::size_t q = 0; q < yesno; ++q) {
    const std::string topic = "claim" + std::to_string(q) + "y";
    mythqa::QuestionRecord rec;
    rec.question = {"y" + std::to_string(q), "Can " + topic + " spread covid?",
                    mythqa::QuestionType::YesNo, topic};
    mythqa::GoldAnswer yes, no;
    yes.text = "yes";
    no.text = "no";
    yes.supporting.push_back(add(topic + " can spread covid, confirmed"));
    yes.supporting.push_back(add("Yes " + topic + " spreads covid quickly"));
    no.supporting.push_back(add("It is false that " + topic + " can spread covid"));
    yes.neutral.push_back(add("Thinking about " + topic + " lately"));
    yes.refuting = no.supporting;
    no.refuting = yes.supporting;
    rec.answers.push_back(std::move(yes));
    rec.answers.push_back(std::move(no));
    records.push_back(std::move(rec));
  }
  for (std::size_t d = 0; d < distractors; ++d) {
    add("unrelated gardening note number " + std::to_string(d));
  }
  return {mythqa::Corpus(std::move(tweets)), mythqa::Dataset(std::move(records))};
}

}  // namespace testsupport
