#pragma once

// Clients for the inference sidecar (HTTP/1.1, JSON bodies):
//   POST /nli      {"pairs": [{"premise", "hypothesis"}]}
//                  -> {"results": [{"label", "scores": [entail, neutral, contra]}]}
//   POST /embed    {"texts": [..]} -> {"vectors": [[..]], "dim": d}
//   POST /extract  {"question", "contexts": [..]} -> {"spans": [[{"text", "score"}]]}
//   GET  /health   -> {"models": {..}, "dim": d}

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mythqa/reader.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/stance.hpp"

namespace mythqa::remote {

struct Endpoint {
  std::string scheme = "http";
  std::string host;
  int port = 80;

  // Accepts "http://host:port", "host:port" or "host". Throws InvalidArgument.
  static Endpoint parse(const std::string& url);
  std::string url() const;
};

struct ClientOptions {
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{120000};
  std::size_t max_batch = 64;
  std::size_t max_in_flight = 4;
};

// POSTs a JSON body and returns the parsed response. Throws TransportError
// (carrying `offset`) on connection failure, non-200 status or a non-JSON body.
nlohmann::json post_json(const Endpoint& ep, const std::string& path, const nlohmann::json& body,
                         const ClientOptions& opts, std::size_t offset);
nlohmann::json get_json(const Endpoint& ep, const std::string& path, const ClientOptions& opts);

enum class NliOrientation {
  TweetPremise,  // premise = tweet, hypothesis = claim
  ClaimPremise,  // premise = claim, hypothesis = tweet
};

class RemoteNliScorer final : public StanceScorer {
 public:
  RemoteNliScorer(Endpoint endpoint, ClientOptions options = {},
                  NliOrientation orientation = NliOrientation::TweetPremise);

  std::vector<StanceJudgment> classify_batch(const Claim& claim,
                                             std::span<const Tweet> tweets) const override;
  std::string name() const override { return "remote-nli@" + endpoint_.url(); }

 private:
  std::vector<StanceJudgment> send(const Claim& claim, std::span<const Tweet> tweets,
                                   std::size_t offset) const;

  Endpoint endpoint_;
  ClientOptions options_;
  NliOrientation orientation_;
};

class RemoteEmbedder final : public EmbeddingProvider {
 public:
  // Queries /health for the model dimension.
  explicit RemoteEmbedder(Endpoint endpoint, ClientOptions options = {});
  RemoteEmbedder(Endpoint endpoint, std::size_t dim, ClientOptions options = {});

  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const override;
  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "remote-embed@" + endpoint_.url(); }

 private:
  Endpoint endpoint_;
  ClientOptions options_;
  std::size_t dim_ = 0;
};

class RemoteExtractor final : public AnswerExtractor {
 public:
  RemoteExtractor(Endpoint endpoint, ClientOptions options = {}, bool generative = false);

  std::optional<AnswerSpan> extract_one(const Question& question,
                                        const Tweet& tweet) const override;
  bool is_generative() const override { return generative_; }
  std::string name() const override { return "remote-extract@" + endpoint_.url(); }

 private:
  Endpoint endpoint_;
  ClientOptions options_;
  bool generative_;
};

}  // namespace mythqa::remote
