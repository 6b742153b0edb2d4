#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "msic/bound.hpp"
#include "msic/code.hpp"
#include "msic/graphs.hpp"
#include "msic/model.hpp"
#include "msic/verify.hpp"

namespace msic {

struct ReportOptions {
  bool oracle = false;
  bool exhaustive = false;
  bool include_trace = false;
  int jobs = 1;
  int oracle_max_messages = 8;
  TreeSearchOptions trees;
};

/// Everything the pipeline computes for one instance.
struct Report {
  ProblemInstance original;
  Simplification simplified;
  GraphPair graphs;
  SccReport scc;
  AlgorithmTrace trace;
  int lower = 0;
  TreeFamily trees;
  CodeBlueprint plan;
  LinearIndexCode code;
  DecodeResult decode;
  std::optional<OracleResult> oracle;
  bool include_trace = false;

  int upper() const { return plan.length(); }
  /// Bounds meet, or the linear optimum reaches the lower bound.
  bool certified() const;
  /// lower <= oracle <= upper where present, and the built code decodes.
  bool consistent() const;
};

/// simplify, build graphs, classify, bound, trees, code, verify, and
/// optionally the oracle. Throws GuardError when the oracle guard trips.
Report build_report(const ProblemInstance& inst, const ReportOptions& opts = {});

nlohmann::json to_json(const SccReport& rep);
nlohmann::json to_json(const ConnectingTree& t);
nlohmann::json to_json(const Report& r);
std::string to_text(const Report& r);

}  // namespace msic
