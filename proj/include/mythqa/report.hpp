#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "mythqa/corpus.hpp"
#include "mythqa/metrics.hpp"

namespace mythqa::metrics {

nlohmann::json to_json(const EvalReport& report);

// Aligned plain-text tables: retrieval (MH@k / H@k), answers and contradictory
// evidence (F1_ans, F1_CONTRO@e), stance P/R/F.
void print_report(std::ostream& out, const EvalReport& report);

}  // namespace mythqa::metrics

namespace mythqa {

nlohmann::json to_json(const CorpusStats& stats);
nlohmann::json to_json(const IngestReport& report);

}  // namespace mythqa
