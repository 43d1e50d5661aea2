#include "mythqa/remote.hpp"

#include <algorithm>
#include <future>

#include <httplib.h>

#include "mythqa/error.hpp"

namespace mythqa::remote {

using nlohmann::json;

Endpoint Endpoint::parse(const std::string& url) {
  Endpoint ep;
  std::string rest = url;
  if (const auto p = rest.find("://"); p != std::string::npos) {
    ep.scheme = rest.substr(0, p);
    rest = rest.substr(p + 3);
  }
  if (ep.scheme != "http") throw InvalidArgument("unsupported endpoint scheme '" + ep.scheme + "'");
  if (const auto slash = rest.find('/'); slash != std::string::npos) rest.resize(slash);
  if (const auto colon = rest.rfind(':'); colon != std::string::npos) {
    const std::string port = rest.substr(colon + 1);
    rest.resize(colon);
    try {
      std::size_t used = 0;
      ep.port = std::stoi(port, &used);
      if (used != port.size() || ep.port <= 0 || ep.port > 65535) throw std::out_of_range("port");
    } catch (const std::exception&) {
      throw InvalidArgument("bad port in endpoint '" + url + "'");
    }
  }
  if (rest.empty()) throw InvalidArgument("endpoint '" + url + "' has no host");
  ep.host = rest;
  return ep;
}

std::string Endpoint::url() const { return scheme + "://" + host + ":" + std::to_string(port); }

namespace {

httplib::Client make_client(const Endpoint& ep, const ClientOptions& opts) {
  httplib::Client cli(ep.host, ep.port);
  const auto ct = opts.connect_timeout.count();
  const auto rt = opts.read_timeout.count();
  cli.set_connection_timeout(ct / 1000, (ct % 1000) * 1000);
  cli.set_read_timeout(rt / 1000, (rt % 1000) * 1000);
  cli.set_write_timeout(rt / 1000, (rt % 1000) * 1000);
  return cli;
}

json parse_body(const httplib::Result& res, const Endpoint& ep, const std::string& path,
                std::size_t offset) {
  if (!res) {
    throw TransportError(ep.url() + path + ": " + httplib::to_string(res.error()), offset);
  }
  if (res->status != 200) {
    throw TransportError(ep.url() + path + ": HTTP " + std::to_string(res->status), offset);
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error&) {
    throw TransportError(ep.url() + path + ": response is not JSON", offset);
  }
}

[[noreturn]] void malformed(const Endpoint& ep, const std::string& path, const std::string& msg,
                            std::size_t offset) {
  throw TransportError(ep.url() + path + ": malformed response: " + msg, offset);
}

// Runs fn(begin, end) over consecutive chunks, at most `in_flight` at once.
// Results are concatenated in input order; on failure the lowest-offset error
// propagates and nothing is returned.
template <class T, class Fn>
std::vector<T> chunked(std::size_t n, const ClientOptions& opts, Fn&& fn) {
  const std::size_t batch = std::max<std::size_t>(opts.max_batch, 1);
  const std::size_t in_flight = std::max<std::size_t>(opts.max_in_flight, 1);
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t wave = 0; wave < n; wave += batch * in_flight) {
    std::vector<std::future<std::vector<T>>> futures;
    for (std::size_t b = wave; b < std::min(n, wave + batch * in_flight); b += batch) {
      const std::size_t e = std::min(n, b + batch);
      if (in_flight == 1) {
        std::promise<std::vector<T>> p;
        p.set_value(fn(b, e));
        futures.push_back(p.get_future());
      } else {
        futures.push_back(std::async(std::launch::async, fn, b, e));
      }
    }
    std::exception_ptr failure;
    std::vector<std::vector<T>> parts;
    for (auto& f : futures) {
      try {
        parts.push_back(f.get());
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace

json post_json(const Endpoint& ep, const std::string& path, const json& body,
               const ClientOptions& opts, std::size_t offset) {
  auto cli = make_client(ep, opts);
  auto res = cli.Post(path, body.dump(), "application/json");
  return parse_body(res, ep, path, offset);
}

json get_json(const Endpoint& ep, const std::string& path, const ClientOptions& opts) {
  auto cli = make_client(ep, opts);
  auto res = cli.Get(path);
  return parse_body(res, ep, path, 0);
}

RemoteNliScorer::RemoteNliScorer(Endpoint endpoint, ClientOptions options,
                                 NliOrientation orientation)
    : endpoint_(std::move(endpoint)), options_(options), orientation_(orientation) {}

std::vector<StanceJudgment> RemoteNliScorer::send(const Claim& claim,
                                                  std::span<const Tweet> tweets,
                                                  std::size_t offset) const {
  json pairs = json::array();
  for (const auto& t : tweets) {
    if (orientation_ == NliOrientation::TweetPremise) {
      pairs.push_back({{"premise", t.text}, {"hypothesis", claim.text}});
    } else {
      pairs.push_back({{"premise", claim.text}, {"hypothesis", t.text}});
    }
  }
  const json resp = post_json(endpoint_, "/nli", {{"pairs", std::move(pairs)}}, options_, offset);
  if (!resp.is_object() || !resp.contains("results") || !resp["results"].is_array()) {
    malformed(endpoint_, "/nli", "missing \"results\" list", offset);
  }
  const auto& results = resp["results"];
  if (results.size() != tweets.size()) {
    malformed(endpoint_, "/nli",
              std::to_string(results.size()) + " results for " + std::to_string(tweets.size()) +
                  " pairs",
              offset);
  }
  std::vector<StanceJudgment> out;
  out.reserve(results.size());
  for (const auto& r : results) {
    if (!r.is_object() || !r.contains("label") || !r["label"].is_string() || !r.contains("scores") ||
        !r["scores"].is_array() || r["scores"].size() != 3) {
      malformed(endpoint_, "/nli", "each result needs \"label\" and three \"scores\"", offset);
    }
    double s[3];
    for (int i = 0; i < 3; ++i) {
      if (!r["scores"][i].is_number()) malformed(endpoint_, "/nli", "scores must be numbers", offset);
      s[i] = r["scores"][i].get<double>();
    }
    NliLabel nli;
    try {
      nli = parse_nli_label(r["label"].get<std::string>());
    } catch (const ParseError& e) {
      malformed(endpoint_, "/nli", e.what(), offset);
    }
    // Wire order is (entailment, neutral, contradiction).
    StanceScores scores{};
    scores[static_cast<std::size_t>(StanceLabel::Supporting)] = s[0];
    scores[static_cast<std::size_t>(StanceLabel::Neutral)] = s[1];
    scores[static_cast<std::size_t>(StanceLabel::Refuting)] = s[2];
    auto judgment = StanceJudgment::from_scores(scores);
    if (judgment.score(map_nli_label(nli)) < judgment.score(judgment.label)) {
      malformed(endpoint_, "/nli", "label is not the argmax of its scores", offset);
    }
    out.push_back(judgment);
  }
  return out;
}

std::vector<StanceJudgment> RemoteNliScorer::classify_batch(const Claim& claim,
                                                            std::span<const Tweet> tweets) const {
  return chunked<StanceJudgment>(tweets.size(), options_, [&](std::size_t b, std::size_t e) {
    return send(claim, tweets.subspan(b, e - b), b);
  });
}

RemoteEmbedder::RemoteEmbedder(Endpoint endpoint, ClientOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  const json health = get_json(endpoint_, "/health", options_);
  if (!health.is_object() || !health.contains("dim") || !health["dim"].is_number_unsigned()) {
    malformed(endpoint_, "/health", "missing unsigned \"dim\"", 0);
  }
  dim_ = health["dim"].get<std::size_t>();
}

RemoteEmbedder::RemoteEmbedder(Endpoint endpoint, std::size_t dim, ClientOptions options)
    : endpoint_(std::move(endpoint)), options_(options), dim_(dim) {}

std::vector<std::vector<float>> RemoteEmbedder::embed(const std::vector<std::string>& texts) const {
  return chunked<std::vector<float>>(texts.size(), options_, [&](std::size_t b, std::size_t e) {
    json body = {{"texts", json(std::vector<std::string>(texts.begin() + b, texts.begin() + e))}};
    const json resp = post_json(endpoint_, "/embed", body, options_, b);
    if (!resp.is_object() || !resp.contains("vectors") || !resp["vectors"].is_array()) {
      malformed(endpoint_, "/embed", "missing \"vectors\" list", b);
    }
    if (resp["vectors"].size() != e - b) malformed(endpoint_, "/embed", "vector count mismatch", b);
    std::vector<std::vector<float>> out;
    for (const auto& v : resp["vectors"]) {
      if (!v.is_array() || v.size() != dim_) {
        malformed(endpoint_, "/embed", "vector dimension differs from " + std::to_string(dim_), b);
      }
      std::vector<float> row;
      row.reserve(dim_);
      for (const auto& x : v) {
        if (!x.is_number()) malformed(endpoint_, "/embed", "vector entries must be numbers", b);
        row.push_back(x.get<float>());
      }
      out.push_back(std::move(row));
    }
    return out;
  });
}

RemoteExtractor::RemoteExtractor(Endpoint endpoint, ClientOptions options, bool generative)
    : endpoint_(std::move(endpoint)), options_(options), generative_(generative) {}

std::optional<AnswerSpan> RemoteExtractor::extract_one(const Question& question,
                                                       const Tweet& tweet) const {
  const json body = {{"question", question.text}, {"contexts", json::array({tweet.text})}};
  const json resp = post_json(endpoint_, "/extract", body, options_, 0);
  if (!resp.is_object() || !resp.contains("spans") || !resp["spans"].is_array() ||
      resp["spans"].size() != 1 || !resp["spans"][0].is_array()) {
    malformed(endpoint_, "/extract", "expected one span list per context", 0);
  }
  std::optional<AnswerSpan> best;
  for (const auto& s : resp["spans"][0]) {
    if (!s.is_object() || !s.contains("text") || !s["text"].is_string() || !s.contains("score") ||
        !s["score"].is_number()) {
      malformed(endpoint_, "/extract", "spans need \"text\" and numeric \"score\"", 0);
    }
    const double score = s["score"].get<double>();
    if (!best || score > best->span_score) best = AnswerSpan{s["text"].get<std::string>(), score};
  }
  return best;
}

}  // namespace mythqa::remote
