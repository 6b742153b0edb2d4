#include "msic/graphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msic {

std::string_view to_string(LeafClass c) {
  switch (c) {
    case LeafClass::MessageConnected: return "message-connected";
    case LeafClass::MessageDisconnected: return "message-disconnected";
    case LeafClass::SemiDegenerated: return "semi-degenerated";
    case LeafClass::SemiNonDegenerated: return "semi-non-degenerated";
  }
  return "?";
}

std::size_t SccReport::count(LeafClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

// ---------------------------------------------------------------------------
// SCCs

namespace {

// Iterative Tarjan; returns component id per vertex in reverse topological
// order of discovery (ids are renumbered by the caller).
std::vector<int> tarjan(const GraphPair& g, int& num_components) {
  const int n = g.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> stack;
  int next_index = 0;
  num_components = 0;

  struct Frame {
    Vertex v;
    std::size_t child;
  };
  std::vector<Frame> call;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const VertexSet& out = g.out(f.v);
      if (f.child < out.size()) {
        Vertex w = out[f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      Vertex v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = num_components;
        } while (w != v);
        ++num_components;
      }
    }
  }
  return comp;
}

// Vertices reachable from `sources` by following arcs forward (forward=true)
// or backward. Sources are included only if reached through an arc.
std::vector<char> reach(const GraphPair& g, const VertexSet& sources, bool forward) {
  std::vector<char> seen(g.size(), 0);
  std::vector<Vertex> queue;
  for (Vertex s : sources) {
    for (Vertex w : forward ? g.out(s) : g.in(s)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  while (!queue.empty()) {
    Vertex v = queue.back();
    queue.pop_back();
    for (Vertex w : forward ? g.out(v) : g.in(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

VertexSet to_set(const std::vector<char>& mask) {
  VertexSet r;
  for (Vertex v = 0; v < static_cast<Vertex>(mask.size()); ++v) {
    if (mask[v]) r.push_back(v);
  }
  return r;
}

}  // namespace

SccReport scc_decompose(const GraphPair& g) {
  int k = 0;
  std::vector<int> raw = tarjan(g, k);
  std::vector<VertexSet> groups(k);
  for (Vertex v = 0; v < g.size(); ++v) groups[raw[v]].push_back(v);
  std::sort(groups.begin(), groups.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });

  SccReport rep;
  rep.sccs = std::move(groups);
  rep.component_of.assign(g.size(), -1);
  for (int c = 0; c < static_cast<int>(rep.sccs.size()); ++c) {
    for (Vertex v : rep.sccs[c]) rep.component_of[v] = c;
  }
  for (int c = 0; c < static_cast<int>(rep.sccs.size()); ++c) {
    const VertexSet& s = rep.sccs[c];
    if (s.size() < 2) continue;
    bool exits = std::any_of(s.begin(), s.end(), [&](Vertex v) {
      return std::any_of(g.out(v).begin(), g.out(v).end(),
                         [&](Vertex w) { return rep.component_of[w] != c; });
    });
    if (!exits) rep.leaf_sccs.push_back(c);
  }
  return rep;
}

namespace {
Classification classify_known_leaf(const GraphPair& g, const VertexSet& scc);
}  // namespace

SccReport classify(const GraphPair& g) {
  SccReport rep = scc_decompose(g);
  for (int c : rep.leaf_sccs) {
    Classification cl = classify_known_leaf(g, rep.sccs[c]);
    rep.classes.push_back(cl.cls);
    rep.witnesses.push_back(std::move(cl.witness));
  }
  return rep;
}

bool is_leaf_scc(const GraphPair& g, const VertexSet& scc) {
  if (scc.size() < 2) return false;
  SccReport rep = scc_decompose(g);
  for (int c : rep.leaf_sccs) {
    if (rep.sccs[c] == scc) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Reachability

VertexSet predecessors(const GraphPair& g, Vertex i) {
  return to_set(reach(g, {i}, /*forward=*/false));
}

VertexSet predecessors_of_set(const GraphPair& g, const VertexSet& targets) {
  return to_set(reach(g, targets, /*forward=*/false));
}

VertexSet grounded_set(const GraphPair& g) {
  VertexSet leaves;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.is_leaf(v)) leaves.push_back(v);
  }
  return set_union(leaves, predecessors_of_set(g, leaves));
}

bool is_grounded_digraph(const GraphPair& g) {
  return static_cast<int>(grounded_set(g).size()) == g.size();
}

bool is_grounded_by_condensation(const GraphPair& g) {
  SccReport rep = scc_decompose(g);
  const int k = static_cast<int>(rep.sccs.size());
  std::vector<char> has_exit(k, 0);
  for (auto [a, b] : g.arcs()) {
    if (rep.component_of[a] != rep.component_of[b]) has_exit[rep.component_of[a]] = 1;
  }
  for (int c = 0; c < k; ++c) {
    if (rep.sccs[c].size() >= 2 && !has_exit[c]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Message graph

VertexSet m_neighbors(const GraphPair& g, const VertexSet& vs) {
  VertexSet r;
  for (Vertex v : vs) {
    for (Vertex w : g.neighbors(v)) {
      if (!contains(vs, w)) r.push_back(w);
    }
  }
  normalize(r);
  return r;
}

std::vector<VertexSet> message_components(const GraphPair& g, const VertexSet& vs) {
  std::vector<VertexSet> comps;
  std::vector<char> seen(g.size(), 0);
  for (Vertex root : vs) {
    if (seen[root]) continue;
    VertexSet comp;
    std::vector<Vertex> queue{root};
    seen[root] = 1;
    while (!queue.empty()) {
      Vertex v = queue.back();
      queue.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w] && contains(vs, w)) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    normalize(comp);
    comps.push_back(std::move(comp));
  }
  return comps;
}

namespace {

std::vector<int> whole_u_components(const GraphPair& g) {
  std::vector<int> label(g.size(), -1);
  int next = 0;
  for (Vertex root = 0; root < g.size(); ++root) {
    if (label[root] != -1) continue;
    std::vector<Vertex> queue{root};
    label[root] = next;
    while (!queue.empty()) {
      Vertex v = queue.back();
      queue.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (label[w] == -1) {
          label[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

enum class Connectivity { Connected, Disconnected, Semi };

Connectivity connectivity(const GraphPair& g, const VertexSet& scc) {
  if (message_components(g, scc).size() == 1) return Connectivity::Connected;
  std::vector<int> label = whole_u_components(g);
  bool one = std::all_of(scc.begin(), scc.end(),
                         [&](Vertex v) { return label[v] == label[scc.front()]; });
  return one ? Connectivity::Semi : Connectivity::Disconnected;
}

// Leaves outside `scc`, their predecessors, and the non-leaves outside.
struct OutsideView {
  VertexSet leaves;
  VertexSet covered_by_leaves;  // leaves plus their predecessors
  VertexSet non_leaves;
};

OutsideView outside_view(const GraphPair& g, const VertexSet& scc) {
  OutsideView o;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (contains(scc, v)) continue;
    (g.is_leaf(v) ? o.leaves : o.non_leaves).push_back(v);
  }
  o.covered_by_leaves = set_union(o.leaves, predecessors_of_set(g, o.leaves));
  return o;
}

// Witnesses for one candidate S', in trial order: the all-leaf option first,
// then each admissible non-leaf ascending. Stops after the first when
// `first_only` is set.
void witnesses_for_part(const GraphPair& g, const VertexSet& part,
                        const OutsideView& o, bool first_only,
                        std::vector<DegeneracyWitness>& out) {
  VertexSet nbrs = m_neighbors(g, part);
  if (nbrs.empty()) {
    out.push_back({part, o.leaves, std::nullopt, true});
    return;
  }
  if (is_subset(nbrs, o.covered_by_leaves)) {
    out.push_back({part, o.leaves, std::nullopt, false});
    if (first_only) return;
  }
  VertexSet rest = set_difference(nbrs, o.covered_by_leaves);
  for (Vertex w : o.non_leaves) {
    VertexSet cover = predecessors(g, w);
    cover.push_back(w);
    normalize(cover);
    if (is_subset(rest, cover)) {
      out.push_back({part, set_union(o.leaves, {w}), w, false});
      if (first_only) return;
    }
  }
}

// A witness exists for some union of components iff it exists for a single
// component: shrinking S' only shrinks its m-neighbor set. So only single
// components are tried as S'.
std::vector<DegeneracyWitness> search_witnesses(const GraphPair& g, const VertexSet& scc,
                                                bool first_only) {
  std::vector<DegeneracyWitness> found;
  std::vector<VertexSet> comps = message_components(g, scc);
  if (comps.size() < 2) return found;
  OutsideView o = outside_view(g, scc);
  for (const VertexSet& part : comps) {
    witnesses_for_part(g, part, o, first_only, found);
    if (first_only && !found.empty()) break;
  }
  return found;
}

void require_semi_leaf(const GraphPair& g, const VertexSet& scc) {
  if (!is_leaf_scc(g, scc)) throw std::invalid_argument("not a leaf SCC");
  if (connectivity(g, scc) != Connectivity::Semi) {
    throw std::invalid_argument("not a semi leaf SCC");
  }
}

Classification classify_known_leaf(const GraphPair& g, const VertexSet& scc) {
  switch (connectivity(g, scc)) {
    case Connectivity::Connected: return {LeafClass::MessageConnected, std::nullopt};
    case Connectivity::Disconnected: return {LeafClass::MessageDisconnected, std::nullopt};
    case Connectivity::Semi: break;
  }
  auto found = search_witnesses(g, scc, /*first_only=*/true);
  if (found.empty()) return {LeafClass::SemiNonDegenerated, std::nullopt};
  return {LeafClass::SemiDegenerated, std::move(found.front())};
}

}  // namespace

Classification classify_leaf_scc(const GraphPair& g, const VertexSet& scc) {
  if (!is_leaf_scc(g, scc)) throw std::invalid_argument("not a leaf SCC");
  return classify_known_leaf(g, scc);
}

std::optional<DegeneracyWitness> is_degenerated(const GraphPair& g, const VertexSet& scc) {
  require_semi_leaf(g, scc);
  auto found = search_witnesses(g, scc, /*first_only=*/true);
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

std::vector<DegeneracyWitness> degeneracy_witnesses(const GraphPair& g,
                                                    const VertexSet& scc) {
  require_semi_leaf(g, scc);
  return search_witnesses(g, scc, /*first_only=*/false);
}

bool witness_holds(const GraphPair& g, const VertexSet& scc, const DegeneracyWitness& w) {
  if (!is_leaf_scc(g, scc) || connectivity(g, scc) != Connectivity::Semi) return false;
  if (w.part.empty() || w.part.size() >= scc.size() || !is_subset(w.part, scc)) return false;
  // No U edge across the bipartition.
  VertexSet other = set_difference(scc, w.part);
  for (Vertex v : w.part) {
    for (Vertex u : g.neighbors(v)) {
      if (contains(other, u)) return false;
    }
  }
  int non_leaves = 0;
  for (Vertex v : w.outside) {
    if (contains(scc, v)) return false;
    if (!g.is_leaf(v)) ++non_leaves;
  }
  if (non_leaves > 1) return false;
  VertexSet cover = set_union(w.outside, predecessors_of_set(g, w.outside));
  return is_subset(m_neighbors(g, w.part), cover);
}

// ---------------------------------------------------------------------------
// DOT

std::string to_dot(const GraphPair& g, const DotOptions& opts) {
  std::ostringstream os;
  os << "digraph msic {\n";
  os << "  node [shape=circle];\n";
  std::vector<char> clustered(g.size(), 0);
  if (opts.clusters) {
    SccReport rep = classify(g);
    for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
      const VertexSet& s = rep.leaf(k);
      os << "  subgraph cluster_" << k << " {\n";
      os << "    label=\"" << to_string(rep.classes[k]) << "\";\n";
      for (Vertex v : s) {
        os << "    " << v + 1 << ";\n";
        clustered[v] = 1;
      }
      os << "  }\n";
    }
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    if (clustered[v]) continue;
    os << "  " << v + 1;
    if (opts.first_dummy >= 0 && v >= opts.first_dummy) os << " [style=dashed]";
    os << ";\n";
  }
  for (auto [a, b] : g.arcs()) {
    os << "  " << a + 1 << " -> " << b + 1 << " [color=black];\n";
  }
  for (auto [a, b] : g.edges()) {
    os << "  " << a + 1 << " -> " << b + 1 << " [dir=none, color=red];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace msic
