#pragma once

#include <string_view>
#include <vector>

#include "json.hpp"
#include "msic/gf2.hpp"
#include "msic/model.hpp"

namespace msic {

enum class RowKind { TreeXor, SccXor, Uncoded, Linear };

std::string_view to_string(RowKind k);

/// One transmitted bit: a GF(2) combination of messages sent by `sender`.
struct CodeRow {
  int sender = 0;
  gf2::Word coeffs = 0;
  RowKind kind = RowKind::Linear;

  friend bool operator==(const CodeRow&, const CodeRow&) = default;
};

/// Sender-tagged linear index code; its length is the number of rows.
struct LinearIndexCode {
  int num_messages = 0;
  std::vector<CodeRow> rows;

  std::size_t length() const { return rows.size(); }
};

/// Row indices whose support is not inside their sender's message set.
std::vector<int> support_violations(const LinearIndexCode& code, const ProblemInstance& inst);

nlohmann::json to_json(const LinearIndexCode& code);
/// Throws InstanceError with a JSON pointer to the bad field.
LinearIndexCode parse_code(const nlohmann::json& doc, const ProblemInstance& inst);

/// A tree in U: its vertex set and edge set.
struct ConnectingTree {
  VertexSet vertices;
  std::vector<Edge> edges;

  friend bool operator==(const ConnectingTree&, const ConnectingTree&) = default;
};

enum class TreeSearch { Exact, Greedy };

struct TreeSearchOptions {
  TreeSearch mode = TreeSearch::Exact;
  /// Exact search is used only while the number of eligible vertices stays
  /// within this limit; otherwise the greedy family is returned.
  int exact_limit = 16;
};

struct TreeFamily {
  std::vector<ConnectingTree> trees;
  bool exact = false;

  int size() const { return static_cast<int>(trees.size()); }
};

/// Whether `vs` can carry a connecting tree: every member has an outgoing
/// arc, no arc leaves `vs`, no member lies in a message-connected leaf SCC,
/// and U restricted to `vs` is connected.
bool is_connecting_vertex_set(const GraphPair& g, const VertexSet& vs);

/// Vertex-disjoint connecting trees. Exact mode maximizes their number.
TreeFamily find_connecting_trees(const GraphPair& g, const TreeSearchOptions& opts = {});

/// Spanning tree of U restricted to `vs`, Kruskal over lexicographically
/// sorted edges. Throws std::invalid_argument if U[vs] is disconnected.
std::vector<Edge> spanning_tree(const GraphPair& g, const VertexSet& vs);

struct CodeBlueprint {
  std::vector<ConnectingTree> connecting_trees;
  /// One per message-connected leaf SCC; `vertices` is the SCC.
  std::vector<ConnectingTree> scc_spanning_trees;
  /// Non-leaf vertices outside every tree and message-connected leaf SCC.
  VertexSet uncoded;

  int length() const;
};

/// Pairwise XOR scheme. Throws std::invalid_argument when the trees are not
/// disjoint connecting trees.
CodeBlueprint plan_code(const GraphPair& g, const std::vector<ConnectingTree>& trees);

/// Attributes every row to the smallest sender able to send it. Throws
/// std::runtime_error when no sender owns a row's support.
LinearIndexCode assign_senders(const ProblemInstance& inst, const CodeBlueprint& plan);

/// V_out(G) - (N_connected + N_tree), i.e. the blueprint length.
int upper_bound(const GraphPair& g, const std::vector<ConnectingTree>& trees);

}  // namespace msic
