#pragma once

// JSONL record formats exchanged between the pipeline, the evaluator and
// third-party systems.
//
// Prediction line:
//   {"question_id", "qtype": "entity",
//    "predictions": [{"answer", "supporting": [ev], "refuting": [ev]}]}
//   {"question_id", "qtype": "yesno",
//    "predictions": {"verdicts": ["YES"|"NO"|"NOT_SURE"],
//                    "yes_evidence": [ev], "no_evidence": [ev]}}
//   ev = {"tweet_id", "label", "stance_score", "retrieval_score"}; a bare
//   tweet-id string is also accepted on input.
//   An optional "retrieved": [{"tweet_id", "score"}] carries the question's
//   retrieval list.
//
// Retrieval line: {"question_id", "retrieved": [{"tweet_id", "score"}]}
// Stance line:    {"question_id", "answer", "tweet_id", "label"}

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mythqa/metrics.hpp"
#include "mythqa/pipeline.hpp"

namespace mythqa::dumps {

nlohmann::json to_json(const StanceEvidence& ev);
nlohmann::json to_json(const QuestionPrediction& p);
QuestionPrediction prediction_from_json(const nlohmann::json& obj);

void write_predictions(std::ostream& out, const std::vector<QuestionPrediction>& preds);
std::vector<QuestionPrediction> read_predictions(std::istream& in);
std::vector<QuestionPrediction> load_predictions(const std::filesystem::path& path);

void write_retrieval(std::ostream& out, const std::vector<QuestionPrediction>& preds);
std::map<std::string, std::vector<RankedTweet>> read_retrieval(std::istream& in);
std::map<std::string, std::vector<RankedTweet>> load_retrieval(const std::filesystem::path& path);

std::vector<metrics::StancePair> read_stance_pairs(std::istream& in);
std::vector<metrics::StancePair> load_stance_pairs(const std::filesystem::path& path);

}  // namespace mythqa::dumps
