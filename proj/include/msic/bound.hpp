#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "msic/graphs.hpp"
#include "msic/model.hpp"

namespace msic {

/// Algorithm step tags, in the order they sort inside a log.
enum class StepKind {
  Prune,          // (i)
  Dummy,          // (ii)
  ArcToNonLeaf,   // (iii-a)
  ArcToLeaf,      // (iii-b)
  PruneOnce,      // (iv-0), marker; the prune itself follows as (i)
  SelectSemi,     // (iv-a)
  ConnectEdges,   // (iv-b)
  BreakAgain,     // (iv-c), marker
};

std::string_view tag(StepKind k);

struct Step {
  StepKind kind;
  int phase = 1;
  VertexSet scc;
  std::optional<Vertex> vertex;  // pruned vertex, dummy, or arc source
  std::vector<Arc> arcs_removed;
  std::vector<Arc> arcs_added;
  std::vector<Edge> edges_added;

  auto operator<=>(const Step&) const = default;
  bool operator==(const Step&) const = default;
};

/// Working copy (G-dagger, U-dagger) of the graphs being broken.
struct AlgorithmState {
  GraphPair graphs;
  /// Vertices with index >= base_vertices are appended dummies.
  int base_vertices = 0;
  int phase = 1;
  std::vector<Step> log;

  explicit AlgorithmState(GraphPair g)
      : graphs(std::move(g)), base_vertices(graphs.size()) {}

  int dummy_count() const { return graphs.size() - base_vertices; }
};

/// Source of the "arbitrary" choices. pick(n) returns an index in [0, n);
/// option 0 is always the smallest-index rule.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t pick(std::size_t options) = 0;
};

class SmallestIndexChooser final : public Chooser {
 public:
  std::size_t pick(std::size_t) override { return 0; }
};

// Individual steps. Each validates its precondition and throws
// std::invalid_argument when it does not hold.

/// (i) Remove every arc leaving `v`.
void prune_scc(AlgorithmState& st, const VertexSet& scc, Vertex v);

/// (ii) Append a leaf with an arc from the smallest SCC vertex.
Vertex append_dummy(AlgorithmState& st, const VertexSet& scc);

/// (iii-a)/(iii-b). `source` defaults to the smallest vertex of the witness
/// part; for (iii-b) `target` defaults to the smallest member of
/// `witness.outside`. The witness is re-verified first.
void add_degenerate_arc(AlgorithmState& st, const VertexSet& scc,
                        const DegeneracyWitness& witness,
                        std::optional<Vertex> source = std::nullopt,
                        std::optional<Vertex> target = std::nullopt);

/// (iv-b) Chains the U-components of the SCC through their smallest
/// vertices. Returns the added edges.
std::vector<Edge> make_message_connected(AlgorithmState& st, const VertexSet& scc);

enum class PruneLimit { All, Once };

/// The BreakLeafSCC procedure. Returns the number of prunes performed.
int break_leaf_sccs(AlgorithmState& st, PruneLimit limit, Chooser& chooser);
int break_leaf_sccs(AlgorithmState& st, PruneLimit limit);

enum class SearchMode { Deterministic, Exhaustive };

struct AlgorithmOptions {
  SearchMode mode = SearchMode::Deterministic;
  /// Upper bound on enumerated runs plus memoized states in exhaustive mode;
  /// past it the deterministic trace is returned with `fell_back` set.
  std::size_t state_budget = 200000;
};

struct AlgorithmTrace {
  GraphPair initial;
  AlgorithmState state;
  int n_connected = 0;
  int n_remaining = 0;
  int n_iv = 0;
  SearchMode mode = SearchMode::Deterministic;
  bool fell_back = false;
  std::size_t states_explored = 0;

  int dummy_count() const { return state.dummy_count(); }
};

AlgorithmTrace run_algorithm1(const GraphPair& g, const AlgorithmOptions& opts = {});

/// V_out(G) - (N_connected + N_iv). Throws std::logic_error when the count
/// disagrees with V_out of the final state.
int lower_bound(const AlgorithmTrace& trace);

/// Prunes every leaf SCC at its smallest vertex and returns V_out.
int lower_bound_prune_all(const GraphPair& g);

nlohmann::json to_json(const Step& s);
nlohmann::json to_json(const AlgorithmTrace& t, bool include_steps = true);

}  // namespace msic
