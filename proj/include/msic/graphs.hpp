#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msic/model.hpp"

namespace msic {

enum class LeafClass {
  MessageConnected,
  MessageDisconnected,
  SemiDegenerated,
  SemiNonDegenerated,
};

std::string_view to_string(LeafClass c);

inline bool is_semi(LeafClass c) {
  return c == LeafClass::SemiDegenerated || c == LeafClass::SemiNonDegenerated;
}

/// Proof that a semi leaf SCC is degenerated: `part` (S') is a union of
/// U-components of the SCC, and every m-neighbor of `part` lies in
/// `outside` or is a predecessor of a vertex in `outside`. At most one
/// member of `outside` is a non-leaf; that member is `non_leaf`.
struct DegeneracyWitness {
  VertexSet part;
  VertexSet outside;
  std::optional<Vertex> non_leaf;
  /// `part` has no m-neighbors, so the covering condition holds trivially.
  bool vacuous = false;

  friend bool operator==(const DegeneracyWitness&, const DegeneracyWitness&) = default;
};

struct SccReport {
  /// SCC partition of V, each sorted, ordered by smallest member.
  std::vector<VertexSet> sccs;
  /// Vertex -> index into `sccs`.
  std::vector<int> component_of;
  /// Indices into `sccs` of leaf SCCs (>= 2 vertices, no arc leaving).
  std::vector<int> leaf_sccs;
  /// Parallel to `leaf_sccs`; empty until classified.
  std::vector<LeafClass> classes;
  std::vector<std::optional<DegeneracyWitness>> witnesses;

  const VertexSet& leaf(std::size_t k) const { return sccs.at(leaf_sccs.at(k)); }
  std::size_t count(LeafClass c) const;
};

/// Tarjan SCC decomposition with leaf SCCs flagged; classes left empty.
SccReport scc_decompose(const GraphPair& g);

/// Decomposition plus classification of every leaf SCC.
SccReport classify(const GraphPair& g);

bool is_leaf_scc(const GraphPair& g, const VertexSet& scc);

/// All j != i with a directed path j ~> i, plus i itself when i lies on a
/// directed cycle.
VertexSet predecessors(const GraphPair& g, Vertex i);

/// Union of predecessors over `targets` (targets themselves excluded unless
/// they reach each other).
VertexSet predecessors_of_set(const GraphPair& g, const VertexSet& targets);

/// Leaves and predecessors of leaves.
VertexSet grounded_set(const GraphPair& g);

/// grounded_set(g) == V.
bool is_grounded_digraph(const GraphPair& g);

/// Same question answered on the condensation: grounded iff no SCC with
/// two or more vertices is a sink of the condensation.
bool is_grounded_by_condensation(const GraphPair& g);

/// Vertices outside `vs` adjacent in U to some member of `vs`.
VertexSet m_neighbors(const GraphPair& g, const VertexSet& vs);

/// Connected components of U restricted to `vs`, ordered by smallest member.
std::vector<VertexSet> message_components(const GraphPair& g, const VertexSet& vs);

struct Classification {
  LeafClass cls;
  std::optional<DegeneracyWitness> witness;
};

/// Throws std::invalid_argument when `scc` is not a leaf SCC of `g`.
Classification classify_leaf_scc(const GraphPair& g, const VertexSet& scc);

/// First degeneracy witness in deterministic order, or nullopt.
/// Throws std::invalid_argument when `scc` is not a semi leaf SCC.
std::optional<DegeneracyWitness> is_degenerated(const GraphPair& g, const VertexSet& scc);

/// Every witness of the canonical shape: `part` a single U-component of the
/// SCC, `outside` all leaves outside the SCC plus at most one non-leaf.
/// Ordered as is_degenerated would try them.
std::vector<DegeneracyWitness> degeneracy_witnesses(const GraphPair& g,
                                                    const VertexSet& scc);

/// Re-checks a witness against the current graphs.
bool witness_holds(const GraphPair& g, const VertexSet& scc, const DegeneracyWitness& w);

struct DotOptions {
  /// Vertices with index >= this are drawn dashed (appended dummies).
  int first_dummy = -1;
  bool clusters = true;
};

/// G arcs black and directed, U edges red and undirected, leaf SCCs as
/// labelled clusters. Vertex labels are one-based.
std::string to_dot(const GraphPair& g, const DotOptions& opts = {});

}  // namespace msic
