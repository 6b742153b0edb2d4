#include "msic/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "msic/gf2.hpp"
#include "msic/graphs.hpp"

namespace msic {

using nlohmann::json;

namespace {

void require_supported(const LinearIndexCode& code, const ProblemInstance& inst) {
  if (code.num_messages != inst.num_messages()) {
    throw std::invalid_argument("code and instance disagree on the number of messages");
  }
  if (!support_violations(code, inst).empty()) {
    throw std::invalid_argument("code row outside its sender's message set");
  }
}

// Runs fn(begin, end) over [0, n) split into `jobs` contiguous chunks.
template <typename Fn>
void parallel_chunks(std::size_t n, int jobs, Fn fn) {
  std::size_t workers = std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t b = std::min(n, w * chunk), e = std::min(n, b + chunk);
    pool.emplace_back(fn, b, e, w);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

// ---------------------------------------------------------------------------
// Rank decoding

DecodeResult rank_decodable(const LinearIndexCode& code, const ProblemInstance& inst) {
  require_supported(code, inst);
  const std::size_t n = code.rows.size();
  DecodeResult res;
  for (Vertex r = 0; r < inst.num_messages(); ++r) {
    if (inst.wants(r).empty()) continue;
    gf2::TrackedBasis basis(n + 1);
    for (std::size_t i = 0; i < n; ++i) basis.insert(code.rows[i].coeffs, i);
    basis.insert(gf2::unit(r), n);
    for (Vertex j : inst.wants(r)) {
      auto red = basis.reduce(gf2::unit(j));
      if (red.residual != 0) {
        res.failure = std::make_pair(r, j);
        res.certificate.clear();
        return res;
      }
      CertificateEntry e{r, j, {}, red.combination.test(n)};
      for (int idx : red.combination.indices()) {
        if (idx != static_cast<int>(n)) e.rows.push_back(idx);
      }
      res.certificate.push_back(std::move(e));
    }
  }
  res.decodable = true;
  return res;
}

bool certificate_valid(const LinearIndexCode& code, const ProblemInstance& inst,
                       const DecodeCertificate& cert) {
  std::size_t pairs = 0;
  for (Vertex r = 0; r < inst.num_messages(); ++r) pairs += inst.wants(r).size();
  if (cert.size() != pairs) return false;
  for (const CertificateEntry& e : cert) {
    if (e.receiver < 0 || e.receiver >= inst.num_messages() ||
        !contains(inst.wants(e.receiver), e.wanted)) {
      return false;
    }
    gf2::Word acc = e.used_own ? gf2::unit(e.receiver) : 0;
    for (int i : e.rows) {
      if (i < 0 || i >= static_cast<int>(code.rows.size())) return false;
      acc ^= code.rows[i].coeffs;
    }
    if (acc != gf2::unit(e.wanted)) return false;
  }
  return true;
}

json to_json(const DecodeResult& r) {
  json out{{"schema", 1}, {"decodable", r.decodable}};
  json cert = json::array();
  for (const CertificateEntry& e : r.certificate) {
    json rows = json::array();
    for (int i : e.rows) rows.push_back(i + 1);
    cert.push_back(json{{"receiver", e.receiver + 1},
                        {"wanted", e.wanted + 1},
                        {"rows", std::move(rows)},
                        {"used_own", e.used_own}});
  }
  out["certificate"] = std::move(cert);
  if (r.failure) {
    out["failure"] = json{{"receiver", r.failure->first + 1}, {"wanted", r.failure->second + 1}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive simulation

bool verify_exhaustive(const LinearIndexCode& code, const ProblemInstance& inst) {
  const int m = inst.num_messages();
  if (m > 20) throw GuardError("exhaustive simulation supports at most 20 messages");
  if (code.rows.size() > 62) throw GuardError("exhaustive simulation supports at most 62 rows");
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<std::uint64_t> codeword(total);
  for (std::uint64_t x = 0; x < total; ++x) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < code.rows.size(); ++i) {
      c |= static_cast<std::uint64_t>(gf2::parity(x & code.rows[i].coeffs)) << i;
    }
    codeword[x] = c;
  }
  std::unordered_map<std::uint64_t, std::uint64_t> seen;
  for (Vertex r = 0; r < m; ++r) {
    gf2::Word want = 0;
    for (Vertex j : inst.wants(r)) want |= gf2::unit(j);
    if (!want) continue;
    seen.clear();
    for (std::uint64_t x = 0; x < total; ++x) {
      std::uint64_t obs = codeword[x] | (((x >> r) & 1) << 62);
      auto [it, fresh] = seen.emplace(obs, x & want);
      if (!fresh && it->second != (x & want)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Minimum linear code oracle

namespace {

using Row = std::uint16_t;

// Subspace in reduced row echelon form: rows sorted by descending pivot, each
// pivot bit present in exactly one row. Two subspaces are equal iff their
// keys are equal.
using Key = std::u16string;

int lead(Row r) { return gf2::leading_bit(r); }

Row reduce(const Key& basis, Row v) {
  for (Row b : basis) {
    if ((v >> lead(b)) & 1) v ^= b;
  }
  return v;
}

std::optional<Key> extend(const Key& basis, Row v) {
  Row w = reduce(basis, v);
  if (!w) return std::nullopt;
  Key out = basis;
  int p = lead(w);
  for (auto& b : out) {
    if ((b >> p) & 1) b ^= w;
  }
  out.insert(std::find_if(out.begin(), out.end(), [&](Row b) { return lead(b) < p; }), w);
  return out;
}

struct KeyHash {
  std::size_t operator()(const Key& k) const { return std::hash<Key>{}(k); }
};

class Oracle {
 public:
  Oracle(const ProblemInstance& inst, const OracleOptions& opts) : opts_(opts) {
    std::map<Row, int> first_sender;
    for (int s = 0; s < inst.num_senders(); ++s) {
      Row full = 0;
      for (Vertex v : inst.sender(s)) full |= Row(1u << v);
      for (Row sub = full; sub; sub = (sub - 1) & full) first_sender.emplace(sub, s);
    }
    for (auto [v, s] : first_sender) {
      candidates_.push_back(v);
      sender_.push_back(s);
    }
    for (Vertex r = 0; r < inst.num_messages(); ++r) {
      for (Vertex j : inst.wants(r)) pairs_.emplace_back(Row(1u << r), Row(1u << j));
    }
  }

  bool decodable(const Key& s) const {
    for (auto [own, want] : pairs_) {
      Row w = reduce(s, want);
      if (w && w != reduce(s, own)) return false;
    }
    return true;
  }

  // Lexicographically smallest list of candidate indices spanning `s`.
  std::vector<int> smallest_basis(const Key& s) const {
    std::vector<int> out;
    gf2::Basis b;
    for (std::size_t i = 0; i < candidates_.size() && out.size() < s.size(); ++i) {
      if (reduce(s, candidates_[i]) == 0 && b.insert(candidates_[i])) {
        out.push_back(static_cast<int>(i));
      }
    }
    return out;
  }

  std::vector<Key> expand(const std::vector<Key>& level) const {
    std::vector<std::unordered_set<Key, KeyHash>> parts(std::max(opts_.jobs, 1));
    parallel_chunks(level.size(), opts_.jobs, [&](std::size_t b, std::size_t e, std::size_t w) {
      for (std::size_t k = b; k < e; ++k) {
        for (Row c : candidates_) {
          if (auto next = extend(level[k], c)) parts[w].insert(std::move(*next));
        }
      }
    });
    std::unordered_set<Key, KeyHash> merged;
    for (auto& p : parts) merged.merge(p);
    std::vector<Key> out(merged.begin(), merged.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<std::vector<int>> best_witness(const std::vector<Key>& level) const {
    std::size_t workers = std::max(opts_.jobs, 1);
    std::vector<std::optional<std::vector<int>>> best(workers);
    parallel_chunks(level.size(), opts_.jobs, [&](std::size_t b, std::size_t e, std::size_t w) {
      for (std::size_t k = b; k < e; ++k) {
        if (!decodable(level[k])) continue;
        std::vector<int> wit = smallest_basis(level[k]);
        if (!best[w] || wit < *best[w]) best[w] = std::move(wit);
      }
    });
    std::optional<std::vector<int>> out;
    for (auto& b : best) {
      if (b && (!out || *b < *out)) out = std::move(b);
    }
    return out;
  }

  Row candidate(int i) const { return candidates_[i]; }
  int sender(int i) const { return sender_[i]; }

 private:
  OracleOptions opts_;
  std::vector<Row> candidates_;
  std::vector<int> sender_;
  std::vector<std::pair<Row, Row>> pairs_;
};

}  // namespace

OracleResult oracle_min_linear(const ProblemInstance& inst, const OracleOptions& opts) {
  const int m = inst.num_messages();
  if (opts.max_messages > 16) throw GuardError("the oracle supports at most 16 messages");
  if (m > opts.max_messages) {
    throw GuardError("oracle guard: " + std::to_string(m) + " messages exceed the limit of " +
                     std::to_string(opts.max_messages));
  }
  const int max_len = opts.max_len < 0 ? m : std::min(opts.max_len, m);
  Oracle oracle(inst, opts);
  OracleResult res;
  res.code.num_messages = m;

  std::vector<Key> level{Key{}};
  for (int len = 0; len <= max_len; ++len) {
    if (len > 0) level = oracle.expand(level);
    if (level.empty()) break;
    res.subspaces_visited += level.size();
    if (auto wit = oracle.best_witness(level)) {
      res.found = true;
      res.length = len;
      for (int i : *wit) {
        res.code.rows.push_back({oracle.sender(i), oracle.candidate(i), RowKind::Linear});
      }
      res.searched_up_to = len;
      return res;
    }
    res.searched_up_to = len;
  }
  return res;
}

json to_json(const OracleResult& r) {
  json out{{"schema", 1},
           {"found", r.found},
           {"linear_optimal", r.found},
           {"searched_up_to", r.searched_up_to},
           {"subspaces_visited", r.subspaces_visited}};
  if (r.found) {
    out["length"] = r.length;
    out["code"] = to_json(r.code);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma consequences

LemmaReport check_lemma_consequences(const LinearIndexCode& code, const ProblemInstance& inst) {
  if (!inst.simplified()) throw std::invalid_argument("lemma checks need a simplified instance");
  if (code.num_messages != inst.num_messages()) {
    throw std::invalid_argument("code and instance disagree on the number of messages");
  }
  GraphPair g = build_graphs(inst);
  gf2::Basis rows;
  for (const CodeRow& r : code.rows) rows.insert(r.coeffs);
  LemmaReport rep;

  for (Vertex i = 0; i < g.size(); ++i) {
    gf2::Basis with_own = rows;
    with_own.insert(gf2::unit(i));
    for (Vertex j : predecessors(g, i)) {
      ++rep.checked;
      if (!with_own.contains(gf2::unit(j))) rep.violations.push_back({1, i, j});
    }
  }

  VertexSet leaves;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.is_leaf(v)) leaves.push_back(v);
  }
  for (Vertex j : predecessors_of_set(g, leaves)) {
    ++rep.checked;
    if (!rows.contains(gf2::unit(j))) rep.violations.push_back({2, std::nullopt, j});
  }

  SccReport scc = classify(g);
  for (std::size_t k = 0; k < scc.leaf_sccs.size(); ++k) {
    if (scc.classes[k] != LeafClass::MessageDisconnected) continue;
    for (Vertex j : scc.leaf(k)) {
      ++rep.checked;
      if (!rows.contains(gf2::unit(j))) rep.violations.push_back({3, std::nullopt, j});
    }
  }
  return rep;
}

json to_json(const LemmaReport& r) {
  json v = json::array();
  for (const LemmaViolation& x : r.violations) {
    json e{{"lemma", x.lemma}, {"message", x.message + 1}};
    if (x.receiver) e["receiver"] = *x.receiver + 1;
    v.push_back(std::move(e));
  }
  return json{{"ok", r.ok()}, {"checked", r.checked}, {"violations", std::move(v)}};
}

}  // namespace msic
