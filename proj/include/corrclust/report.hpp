#pragma once

// JSON renderings of the pipeline, rounding and verification results. Keys
// keep insertion order and no wall-clock values are recorded, so identical
// inputs give byte-identical text.

#include <string>

#include <nlohmann/json.hpp>

#include "corrclust/combine.hpp"
#include "corrclust/verify.hpp"

namespace corrclust {

using Json = nlohmann::ordered_json;

Json to_json(const Clustering& c);
Json to_json(const BudgetTotals& b);
Json to_json(const RoundingReport& r);
Json to_json(const EdgeBoundCheck& c);
Json to_json(const CombinedReport& r);
Json to_json(const lp::SeparationCertificate& c);
Json to_json(const PipelineReport& r);

Json to_json(const FinalRatio& r);
Json to_json(const TrianglePoint& p);
Json to_json(const TriangleSweep& s);
Json to_json(const FConstantCheck& c);

// Two-space indented document with a trailing newline.
std::string render(const Json& doc);

}  // namespace corrclust
