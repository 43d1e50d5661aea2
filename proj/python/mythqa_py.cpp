#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mythqa/cli.hpp"
#include "mythqa/corpus.hpp"
#include "mythqa/dumps.hpp"
#include "mythqa/error.hpp"
#include "mythqa/metrics.hpp"
#include "mythqa/reader.hpp"
#include "mythqa/report.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/stance.hpp"
#include "mythqa/text.hpp"

namespace py = pybind11;
using namespace mythqa;

namespace {

using PyTuple = std::tuple<std::string, std::vector<std::string>, std::vector<std::string>>;

template <class T>
std::vector<T> tuples(const std::vector<PyTuple>& in) {
  std::vector<T> out;
  for (const auto& [a, s, r] : in) out.push_back({a, s, r});
  return out;
}

std::vector<RankedTweet> ranked(const std::vector<std::string>& ids) {
  std::vector<RankedTweet> out;
  double s = static_cast<double>(ids.size());
  for (const auto& id : ids) out.push_back({id, s--});
  return out;
}

metrics::MatchMode mode(bool yesno) { return yesno ? metrics::MatchMode::YesNo : metrics::MatchMode::Entity; }

}  // namespace

PYBIND11_MODULE(_mythqa, m) {
  m.doc() = "multi-answer QA over tweets, stance mining and evaluation metrics";
  m.attr("__version__") = MYTHQA_VERSION;

  static py::exception<Error> base(m, "MythqaError");
  static py::exception<ParseError> parse_error(m, "ParseError", base.ptr());
  static py::exception<ValidationError> validation_error(m, "ValidationError", base.ptr());
  static py::exception<InvalidArgument> invalid_argument(m, "InvalidArgument", base.ptr());
  static py::exception<TransportError> transport_error(m, "TransportError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const ValidationError& e) {
      validation_error(e.what());
    } catch (const InvalidArgument& e) {
      invalid_argument(e.what());
    } catch (const TransportError& e) {
      transport_error(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.def("normalize_text", [](const std::string& s) { return normalize_text(s); });
  m.def("normalize_answer", [](const std::string& s) { return normalize_answer(s); });
  m.def("make_claim", [](const std::string& question, const std::string& answer) {
    return make_claim(Question{"", question, QuestionType::Entity, ""}, answer).text;
  });

  py::class_<Corpus>(m, "Corpus")
      .def(py::init([](const std::vector<std::pair<std::string, std::string>>& rows) {
             std::vector<Tweet> tweets;
             for (const auto& [id, text] : rows) tweets.push_back({id, text});
             return Corpus(std::move(tweets));
           }),
           py::arg("tweets"))
      .def_static("load", [](const std::filesystem::path& p) { return load_corpus(p); })
      .def("save", [](const Corpus& c, const std::filesystem::path& p) { save_corpus(p, c); })
      .def("__len__", &Corpus::size)
      .def("__contains__", [](const Corpus& c, const std::string& id) { return c.contains(id); })
      .def("text", [](const Corpus& c, const std::string& id) { return c.by_id(id).text; })
      .def("tweets", [](const Corpus& c) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& t : c.tweets()) out.emplace_back(t.id, t.text);
        return out;
      });

  py::class_<InvertedIndex>(m, "Bm25Index")
      .def_static(
          "build",
          [](const Corpus& c, double k1, double b, bool stopwords, bool stem) {
            return InvertedIndex::build(c, Bm25Params{k1, b}, AnalyzerConfig{stopwords, stem});
          },
          py::arg("corpus"), py::arg("k1") = 0.9, py::arg("b") = 0.4, py::arg("stopwords") = false,
          py::arg("stem") = false)
      .def_static("load", [](const std::filesystem::path& p) { return InvertedIndex::load(p); })
      .def("save", [](const InvertedIndex& i, const std::filesystem::path& p) { i.save(p); })
      .def("__len__", &InvertedIndex::doc_count)
      .def_property_readonly("term_count", &InvertedIndex::term_count)
      .def(
          "search",
          [](const InvertedIndex& i, const std::string& q, std::size_t k) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& r : bm25_search(i, q, k)) out.emplace_back(r.tweet_id, r.score);
            return out;
          },
          py::arg("query"), py::arg("k") = 100);

  m.def(
      "lexical_stance",
      [](const std::string& claim, const std::string& tweet) {
        const LexicalBaselineScorer sc;
        const auto j = sc.classify(Claim{"", "", claim}, Tweet{"", tweet});
        return std::make_pair(std::string(to_string(j.label)),
                              std::vector<double>(j.scores.begin(), j.scores.end()));
      },
      py::arg("claim"), py::arg("tweet"));

  m.def(
      "f1_ans",
      [](const std::vector<PyTuple>& p, const std::vector<PyTuple>& g) {
        return metrics::f1_ans(tuples<metrics::PredictedTuple>(p), tuples<metrics::GoldTuple>(g));
      },
      py::arg("predicted"), py::arg("gold"));
  m.def(
      "f1_contro",
      [](const std::vector<PyTuple>& p, const std::vector<PyTuple>& g, std::size_t e, bool yesno) {
        return metrics::f1_contro_at_e(tuples<metrics::PredictedTuple>(p), tuples<metrics::GoldTuple>(g), e,
                                       mode(yesno));
      },
      py::arg("predicted"), py::arg("gold"), py::arg("e"), py::arg("yesno") = false);
  m.def(
      "hits_at_k",
      [](const std::vector<std::string>& ids, const std::vector<PyTuple>& g, std::size_t k) {
        return metrics::hits_at_k(ranked(ids), tuples<metrics::GoldTuple>(g), k);
      },
      py::arg("ranked"), py::arg("gold"), py::arg("k"));
  m.def(
      "mhits_at_k",
      [](const std::vector<std::string>& ids, const std::vector<PyTuple>& g, std::size_t k) {
        return metrics::mhits_at_k(ranked(ids), tuples<metrics::GoldTuple>(g), k);
      },
      py::arg("ranked"), py::arg("gold"), py::arg("k"));

  // JSON text of the evaluation report.
  m.def(
      "evaluate_files",
      [](const std::filesystem::path& dataset, const std::filesystem::path& predictions,
         std::vector<std::size_t> e, std::vector<std::size_t> k) {
        metrics::EvalOptions opts;
        opts.e_values = std::move(e);
        opts.k_values = std::move(k);
        const auto preds = dumps::load_predictions(predictions);
        std::map<std::string, std::vector<RankedTweet>> retrieval;
        for (const auto& p : preds) {
          if (!p.retrieved.empty()) retrieval[p.question_id] = p.retrieved;
        }
        const auto report = metrics::evaluate(read_dataset(dataset), preds, opts,
                                              retrieval.empty() ? nullptr : &retrieval);
        return metrics::to_json(report).dump();
      },
      py::arg("dataset"), py::arg("predictions"), py::arg("e") = std::vector<std::size_t>{1, 10, 100},
      py::arg("k") = std::vector<std::size_t>{100, 1000});

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
