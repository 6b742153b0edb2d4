#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "msic/code.hpp"
#include "msic/model.hpp"

namespace msic {

/// How receiver `receiver` recovers x_`wanted`: XOR of the listed code rows,
/// plus its own message when `used_own` is set.
struct CertificateEntry {
  Vertex receiver = 0;
  Vertex wanted = 0;
  std::vector<int> rows;
  bool used_own = false;

  friend bool operator==(const CertificateEntry&, const CertificateEntry&) = default;
};

using DecodeCertificate = std::vector<CertificateEntry>;

struct DecodeResult {
  bool decodable = false;
  DecodeCertificate certificate;              // filled when decodable
  std::optional<std::pair<Vertex, Vertex>> failure;  // first (receiver, wanted)
};

/// Span test per (receiver, wanted) pair. Throws std::invalid_argument when
/// a row leaves its sender's support.
DecodeResult rank_decodable(const LinearIndexCode& code, const ProblemInstance& inst);

/// Recombines every certificate entry and checks it yields the unit vector.
bool certificate_valid(const LinearIndexCode& code, const ProblemInstance& inst,
                       const DecodeCertificate& cert);

nlohmann::json to_json(const DecodeResult& r);

/// Simulates every message assignment and checks each receiver's wanted bits
/// are a function of what it observes. Works for any code given as rows,
/// ignoring sender supports. Throws GuardError when m > 20 or there are more
/// than 62 rows.
bool verify_exhaustive(const LinearIndexCode& code, const ProblemInstance& inst);

struct OracleOptions {
  /// Longest code length tried; negative means up to m.
  int max_len = -1;
  /// Guard on the number of messages. Values above 16 are rejected.
  int max_messages = 8;
  /// Worker threads for expanding each search level.
  int jobs = 1;
};

struct OracleResult {
  bool found = false;
  int length = 0;
  LinearIndexCode code;
  /// Largest length fully searched.
  int searched_up_to = -1;
  std::size_t subspaces_visited = 0;
};

/// Shortest sender-feasible linear code decodable by all receivers, and the
/// lexicographically smallest one of that length (rows compared by their
/// position in the ascending list of candidate vectors). Throws GuardError
/// when m exceeds the guard.
OracleResult oracle_min_linear(const ProblemInstance& inst, const OracleOptions& opts = {});

nlohmann::json to_json(const OracleResult& r);

struct LemmaViolation {
  int lemma = 0;                    // 1, 2 or 3
  std::optional<Vertex> receiver;   // check 1 only
  Vertex message = 0;

  friend bool operator==(const LemmaViolation&, const LemmaViolation&) = default;
};

struct LemmaReport {
  int checked = 0;
  std::vector<LemmaViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Rank facts every decodable code must satisfy on the instance's graphs:
///   1. receiver i recovers every predecessor of i;
///   2. every predecessor of a leaf is in the span of the rows alone;
///   3. so is every vertex of a message-disconnected leaf SCC.
/// Requires a simplified instance (std::invalid_argument otherwise).
LemmaReport check_lemma_consequences(const LinearIndexCode& code, const ProblemInstance& inst);

nlohmann::json to_json(const LemmaReport& r);

}  // namespace msic
