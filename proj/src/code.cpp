#include "msic/code.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "msic/graphs.hpp"

namespace msic {

using nlohmann::json;

std::string_view to_string(RowKind k) {
  switch (k) {
    case RowKind::TreeXor: return "tree-xor";
    case RowKind::SccXor: return "scc-xor";
    case RowKind::Uncoded: return "uncoded";
    case RowKind::Linear: return "linear";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Code rows and JSON

namespace {

gf2::Word mask_of(const VertexSet& s) {
  gf2::Word w = 0;
  for (Vertex v : s) w |= gf2::unit(v);
  return w;
}

void require_word_size(int m) {
  if (m > gf2::kMaxBits) {
    throw GuardError("linear codes support at most " + std::to_string(gf2::kMaxBits) +
                     " messages");
  }
}

}  // namespace

std::vector<int> support_violations(const LinearIndexCode& code, const ProblemInstance& inst) {
  std::vector<int> bad;
  for (std::size_t i = 0; i < code.rows.size(); ++i) {
    const CodeRow& row = code.rows[i];
    if (row.sender < 0 || row.sender >= inst.num_senders() ||
        (row.coeffs & ~mask_of(inst.sender(row.sender))) != 0) {
      bad.push_back(static_cast<int>(i));
    }
  }
  return bad;
}

json to_json(const LinearIndexCode& code) {
  json rows = json::array();
  for (const CodeRow& r : code.rows) {
    json coeffs = json::array();
    for (int i = 0; i < code.num_messages; ++i) coeffs.push_back((r.coeffs >> i) & 1);
    rows.push_back(json{{"sender", r.sender + 1},
                        {"coeffs", std::move(coeffs)},
                        {"kind", to_string(r.kind)}});
  }
  return json{{"schema", 1},
              {"num_messages", code.num_messages},
              {"length", code.length()},
              {"rows", std::move(rows)}};
}

LinearIndexCode parse_code(const json& doc, const ProblemInstance& inst) {
  const int m = inst.num_messages();
  require_word_size(m);
  if (!doc.is_object()) throw InstanceError("", "code document must be a JSON object");
  if (doc.contains("schema") && doc.at("schema") != 1) {
    throw InstanceError("/schema", "unsupported schema version");
  }
  if (doc.contains("num_messages") && doc.at("num_messages") != m) {
    throw InstanceError("/num_messages", "does not match the instance");
  }
  if (!doc.contains("rows") || !doc.at("rows").is_array()) {
    throw InstanceError("/rows", "expected an array of rows");
  }
  LinearIndexCode code{m, {}};
  const json& rows = doc.at("rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = "/rows/" + std::to_string(i);
    const json& r = rows[i];
    if (!r.is_object()) throw InstanceError(at, "expected an object");
    if (!r.contains("sender") || !r.at("sender").is_number_integer()) {
      throw InstanceError(at + "/sender", "expected an integer");
    }
    int s = r.at("sender").get<int>();
    if (s < 1 || s > inst.num_senders()) throw InstanceError(at + "/sender", "sender out of range");
    if (!r.contains("coeffs") || !r.at("coeffs").is_array() ||
        static_cast<int>(r.at("coeffs").size()) != m) {
      throw InstanceError(at + "/coeffs", "expected " + std::to_string(m) + " coefficients");
    }
    CodeRow row{s - 1, 0, RowKind::Linear};
    for (int k = 0; k < m; ++k) {
      const json& c = r.at("coeffs")[k];
      if (!c.is_number_integer() || (c != 0 && c != 1)) {
        throw InstanceError(at + "/coeffs/" + std::to_string(k), "expected 0 or 1");
      }
      if (c == 1) row.coeffs |= gf2::unit(k);
    }
    if (r.contains("kind")) {
      static constexpr RowKind kinds[] = {RowKind::TreeXor, RowKind::SccXor,
                                          RowKind::Uncoded, RowKind::Linear};
      auto it = std::find_if(std::begin(kinds), std::end(kinds), [&](RowKind k) {
        return r.at("kind").is_string() && r.at("kind").get<std::string>() == to_string(k);
      });
      if (it == std::end(kinds)) throw InstanceError(at + "/kind", "unknown row kind");
      row.kind = *it;
    }
    code.rows.push_back(row);
  }
  return code;
}

// ---------------------------------------------------------------------------
// Connecting trees

namespace {

VertexSet message_connected_vertices(const SccReport& rep) {
  VertexSet r;
  for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
    if (rep.classes[k] == LeafClass::MessageConnected) {
      r = set_union(r, rep.leaf(k));
    }
  }
  return r;
}

VertexSet forward_closure(const GraphPair& g, Vertex v) {
  VertexSet seen{v};
  std::vector<Vertex> queue{v};
  while (!queue.empty()) {
    Vertex x = queue.back();
    queue.pop_back();
    for (Vertex w : g.out(x)) {
      if (!contains(seen, w)) {
        seen.insert(std::lower_bound(seen.begin(), seen.end(), w), w);
        queue.push_back(w);
      }
    }
  }
  return seen;
}

// Vertices that may sit in a connecting tree: eligible themselves and every
// vertex they reach is eligible too (arc closure would pull it in).
VertexSet viable_vertices(const GraphPair& g, const VertexSet& excluded) {
  VertexSet eligible;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!g.is_leaf(v) && !contains(excluded, v)) eligible.push_back(v);
  }
  VertexSet viable;
  for (Vertex v : eligible) {
    if (is_subset(forward_closure(g, v), eligible)) viable.push_back(v);
  }
  return viable;
}

ConnectingTree make_tree(const GraphPair& g, VertexSet vs) {
  std::vector<Edge> edges = spanning_tree(g, vs);
  return ConnectingTree{std::move(vs), std::move(edges)};
}

std::vector<ConnectingTree> greedy_trees(const GraphPair& g, const VertexSet& viable) {
  std::vector<VertexSet> cands;
  for (Vertex v : viable) {
    VertexSet c = forward_closure(g, v);
    if (c.size() >= 2 && message_components(g, c).size() == 1) cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(), [](const VertexSet& a, const VertexSet& b) {
    return std::make_pair(a.size(), a) < std::make_pair(b.size(), b);
  });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<ConnectingTree> out;
  VertexSet used;
  for (VertexSet& c : cands) {
    if (set_difference(c, used).size() == c.size()) {
      used = set_union(used, c);
      out.push_back(make_tree(g, std::move(c)));
    }
  }
  return out;
}

class ExactPacking {
 public:
  ExactPacking(std::vector<std::uint32_t> cands, int bits)
      : cands_(std::move(cands)), by_lowest_(bits) {
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      by_lowest_[std::countr_zero(cands_[i])].push_back(static_cast<int>(i));
    }
  }

  // Maximum number of disjoint candidates inside `avail`. Leaving the lowest
  // free vertex unused is tried first, so among maximum packings the one
  // leaving low-index vertices uncoded wins.
  const std::vector<int>& solve(std::uint32_t avail) {
    if (auto it = memo_.find(avail); it != memo_.end()) return it->second;
    std::vector<int> best;
    if (avail != 0) {
      int v = std::countr_zero(avail);
      best = solve(avail & ~(std::uint32_t{1} << v));
      for (int c : by_lowest_[v]) {
        if (cands_[c] & ~avail) continue;
        const std::vector<int>& rest = solve(avail & ~cands_[c]);
        if (rest.size() + 1 > best.size()) {
          best.assign(1, c);
          best.insert(best.end(), rest.begin(), rest.end());
        }
      }
    }
    return memo_.emplace(avail, std::move(best)).first->second;
  }

 private:
  std::vector<std::uint32_t> cands_;
  std::vector<std::vector<int>> by_lowest_;
  std::unordered_map<std::uint32_t, std::vector<int>> memo_;
};

std::vector<ConnectingTree> exact_trees(const GraphPair& g, const VertexSet& viable) {
  const int k = static_cast<int>(viable.size());
  std::vector<std::uint32_t> out_mask(k, 0), nbr_mask(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (g.has_arc(viable[i], viable[j])) out_mask[i] |= std::uint32_t{1} << j;
      if (g.has_edge(viable[i], viable[j])) nbr_mask[i] |= std::uint32_t{1} << j;
    }
  }
  auto closed = [&](std::uint32_t s) {
    for (std::uint32_t w = s; w; w &= w - 1) {
      if (out_mask[std::countr_zero(w)] & ~s) return false;
    }
    return true;
  };
  auto connected = [&](std::uint32_t s) {
    std::uint32_t seen = s & (~s + 1);
    std::uint32_t frontier = seen;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t w = frontier; w; w &= w - 1) next |= nbr_mask[std::countr_zero(w)];
      next &= s & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == s;
  };

  // Only inclusion-minimal candidates matter: swapping a tree for a smaller
  // candidate inside it keeps the family disjoint.
  std::vector<std::uint32_t> cands;
  std::vector<std::uint32_t> all;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << k); ++s) {
    if (std::popcount(s) >= 2 && closed(s) && connected(s)) all.push_back(s);
  }
  std::stable_sort(all.begin(), all.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  for (std::uint32_t s : all) {
    bool minimal = std::none_of(cands.begin(), cands.end(),
                                [&](std::uint32_t c) { return (c & ~s) == 0; });
    if (minimal) cands.push_back(s);
  }
  std::sort(cands.begin(), cands.end());

  ExactPacking packing(cands, k);
  std::vector<ConnectingTree> out;
  for (int c : packing.solve(k == 0 ? 0 : (k == 32 ? ~std::uint32_t{0}
                                                    : (std::uint32_t{1} << k) - 1))) {
    VertexSet vs;
    for (std::uint32_t w = cands[c]; w; w &= w - 1) vs.push_back(viable[std::countr_zero(w)]);
    out.push_back(make_tree(g, std::move(vs)));
  }
  std::sort(out.begin(), out.end(), [](const ConnectingTree& a, const ConnectingTree& b) {
    return a.vertices < b.vertices;
  });
  return out;
}

// |E| = |V| - 1 edges of U inside the vertex set with no cycle.
bool is_spanning_tree(const GraphPair& g, const ConnectingTree& t) {
  if (t.edges.size() + 1 != t.vertices.size()) return false;
  std::vector<int> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : t.edges) {
    if (!g.has_edge(a, b) || !contains(t.vertices, a) || !contains(t.vertices, b)) return false;
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

}  // namespace

bool is_connecting_vertex_set(const GraphPair& g, const VertexSet& vs) {
  if (vs.size() < 2) return false;
  VertexSet mc = message_connected_vertices(classify(g));
  for (Vertex v : vs) {
    if (g.is_leaf(v) || contains(mc, v)) return false;
    if (!is_subset(g.out(v), vs)) return false;
  }
  return message_components(g, vs).size() == 1;
}

TreeFamily find_connecting_trees(const GraphPair& g, const TreeSearchOptions& opts) {
  VertexSet viable = viable_vertices(g, message_connected_vertices(classify(g)));
  const int limit = std::min(opts.exact_limit, 30);
  if (opts.mode == TreeSearch::Exact && static_cast<int>(viable.size()) <= limit) {
    return TreeFamily{exact_trees(g, viable), true};
  }
  return TreeFamily{greedy_trees(g, viable), false};
}

std::vector<Edge> spanning_tree(const GraphPair& g, const VertexSet& vs) {
  std::vector<int> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<Edge> tree;
  for (auto [a, b] : g.edges()) {
    if (!contains(vs, a) || !contains(vs, b)) continue;
    int ra = find(a), rb = find(b);
    if (ra == rb) continue;
    parent[ra] = rb;
    tree.emplace_back(a, b);
  }
  if (tree.size() + 1 != vs.size()) {
    throw std::invalid_argument("message graph is disconnected on the vertex set");
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Blueprint

int CodeBlueprint::length() const {
  int n = static_cast<int>(uncoded.size());
  for (const auto& t : connecting_trees) n += static_cast<int>(t.edges.size());
  for (const auto& t : scc_spanning_trees) n += static_cast<int>(t.edges.size());
  return n;
}

CodeBlueprint plan_code(const GraphPair& g, const std::vector<ConnectingTree>& trees) {
  CodeBlueprint plan;
  SccReport rep = classify(g);
  VertexSet covered;
  for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
    if (rep.classes[k] != LeafClass::MessageConnected) continue;
    plan.scc_spanning_trees.push_back(make_tree(g, rep.leaf(k)));
    covered = set_union(covered, rep.leaf(k));
  }
  for (const ConnectingTree& t : trees) {
    if (!is_connecting_vertex_set(g, t.vertices)) {
      throw std::invalid_argument("not a connecting tree vertex set");
    }
    if (set_difference(t.vertices, covered).size() != t.vertices.size()) {
      throw std::invalid_argument("connecting trees overlap");
    }
    if (!is_spanning_tree(g, t)) throw std::invalid_argument("edges do not form a tree of U");
    covered = set_union(covered, t.vertices);
    plan.connecting_trees.push_back(t);
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!g.is_leaf(v) && !contains(covered, v)) plan.uncoded.push_back(v);
  }
  return plan;
}

LinearIndexCode assign_senders(const ProblemInstance& inst, const CodeBlueprint& plan) {
  require_word_size(inst.num_messages());
  LinearIndexCode code{inst.num_messages(), {}};
  auto owner = [&](const VertexSet& msgs) {
    std::vector<int> owners = inst.owners_of(msgs);
    if (owners.empty()) throw std::runtime_error("no sender owns the messages of a code row");
    return owners.front();
  };
  auto emit_tree = [&](const ConnectingTree& t, RowKind kind) {
    for (auto [a, b] : t.edges) {
      code.rows.push_back({owner({a, b}), gf2::unit(a) | gf2::unit(b), kind});
    }
  };
  for (const auto& t : plan.connecting_trees) emit_tree(t, RowKind::TreeXor);
  for (const auto& t : plan.scc_spanning_trees) emit_tree(t, RowKind::SccXor);
  for (Vertex v : plan.uncoded) code.rows.push_back({owner({v}), gf2::unit(v), RowKind::Uncoded});
  return code;
}

int upper_bound(const GraphPair& g, const std::vector<ConnectingTree>& trees) {
  return plan_code(g, trees).length();
}

}  // namespace msic
