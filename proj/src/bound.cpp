#include "msic/bound.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace msic {

using nlohmann::json;

std::string_view tag(StepKind k) {
  switch (k) {
    case StepKind::Prune: return "(i)";
    case StepKind::Dummy: return "(ii)";
    case StepKind::ArcToNonLeaf: return "(iii-a)";
    case StepKind::ArcToLeaf: return "(iii-b)";
    case StepKind::PruneOnce: return "(iv-0)";
    case StepKind::SelectSemi: return "(iv-a)";
    case StepKind::ConnectEdges: return "(iv-b)";
    case StepKind::BreakAgain: return "(iv-c)";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Steps

void prune_scc(AlgorithmState& st, const VertexSet& scc, Vertex v) {
  if (!contains(scc, v)) throw std::invalid_argument("prune vertex is not in the SCC");
  if (!is_leaf_scc(st.graphs, scc)) throw std::invalid_argument("prune target is not a leaf SCC");
  Step s{StepKind::Prune, st.phase, scc, v, {}, {}, {}};
  s.arcs_removed = st.graphs.clear_out_arcs(v);
  st.log.push_back(std::move(s));
}

Vertex append_dummy(AlgorithmState& st, const VertexSet& scc) {
  if (classify_leaf_scc(st.graphs, scc).cls != LeafClass::MessageDisconnected) {
    throw std::invalid_argument("dummy vertices attach only to message-disconnected leaf SCCs");
  }
  Vertex d = st.graphs.add_vertex();
  st.graphs.add_arc(scc.front(), d);
  st.log.push_back(Step{StepKind::Dummy, st.phase, scc, d, {}, {{scc.front(), d}}, {}});
  return d;
}

void add_degenerate_arc(AlgorithmState& st, const VertexSet& scc,
                        const DegeneracyWitness& witness, std::optional<Vertex> source,
                        std::optional<Vertex> target) {
  if (!witness_holds(st.graphs, scc, witness)) {
    throw std::invalid_argument("stale or invalid degeneracy witness");
  }
  Vertex u = source.value_or(witness.part.front());
  if (!contains(witness.part, u)) throw std::invalid_argument("arc source outside S'");

  StepKind kind;
  Vertex to;
  if (witness.non_leaf) {
    kind = StepKind::ArcToNonLeaf;
    to = *witness.non_leaf;
  } else {
    if (witness.outside.empty()) {
      throw std::logic_error("degeneracy witness has no vertex to receive the arc");
    }
    kind = StepKind::ArcToLeaf;
    to = target.value_or(witness.outside.front());
    if (!contains(witness.outside, to) || !st.graphs.is_leaf(to)) {
      throw std::invalid_argument("(iii-b) target must be a leaf of the witness");
    }
  }
  st.graphs.add_arc(u, to);
  st.log.push_back(Step{kind, st.phase, scc, u, {}, {{u, to}}, {}});
}

std::vector<Edge> make_message_connected(AlgorithmState& st, const VertexSet& scc) {
  Classification c = classify_leaf_scc(st.graphs, scc);
  if (!is_semi(c.cls)) throw std::invalid_argument("edges are only added to semi leaf SCCs");
  std::vector<VertexSet> comps = message_components(st.graphs, scc);
  std::vector<Edge> added;
  for (std::size_t k = 1; k < comps.size(); ++k) {
    Vertex a = comps[k - 1].front();
    Vertex b = comps[k].front();
    st.graphs.add_edge(a, b);
    added.emplace_back(std::min(a, b), std::max(a, b));
  }
  st.log.push_back(Step{StepKind::ConnectEdges, st.phase, scc, std::nullopt, {}, {}, added});
  return added;
}

// ---------------------------------------------------------------------------
// BreakLeafSCC

namespace {

std::vector<VertexSet> leaf_sccs_of_class(const SccReport& rep, LeafClass c) {
  std::vector<VertexSet> r;
  for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
    if (rep.classes[k] == c) r.push_back(rep.leaf(k));
  }
  return r;
}

bool exploring(const Chooser& ch) {
  return dynamic_cast<const SmallestIndexChooser*>(&ch) == nullptr;
}

// One (iii) step on a chosen degenerated SCC.
void break_one_degenerated(AlgorithmState& st, const std::vector<VertexSet>& degenerated,
                           Chooser& chooser) {
  const VertexSet& scc = degenerated[chooser.pick(degenerated.size())];
  std::vector<DegeneracyWitness> ws;
  if (exploring(chooser)) {
    ws = degeneracy_witnesses(st.graphs, scc);
  } else if (auto w = is_degenerated(st.graphs, scc)) {
    ws.push_back(std::move(*w));
  }
  std::vector<std::pair<std::size_t, Vertex>> options;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (Vertex u : ws[i].part) options.emplace_back(i, u);
  }
  if (options.empty()) throw std::logic_error("degenerated SCC without a witness");
  auto [wi, u] = options[chooser.pick(options.size())];
  add_degenerate_arc(st, scc, ws[wi], u);
}

}  // namespace

int break_leaf_sccs(AlgorithmState& st, PruneLimit limit, Chooser& chooser) {
  int prunes = 0;
  {
    SccReport rep = classify(st.graphs);
    std::vector<VertexSet> connected = leaf_sccs_of_class(rep, LeafClass::MessageConnected);
    if (limit == PruneLimit::Once) {
      if (connected.empty()) throw std::logic_error("(iv-0) without a message-connected leaf SCC");
      const VertexSet chosen = connected[chooser.pick(connected.size())];
      connected = {chosen};
    }
    // Pruning one leaf SCC leaves every other leaf SCC and its class intact.
    for (const VertexSet& scc : connected) {
      prune_scc(st, scc, scc[chooser.pick(scc.size())]);
      ++prunes;
    }
  }

  // Each pass either removes a leaf SCC or grows one; both are bounded.
  const std::size_t guard = 4 * static_cast<std::size_t>(st.graphs.size() + 4) *
                            static_cast<std::size_t>(st.graphs.size() + 4);
  std::size_t passes = 0;
  for (;;) {
    SccReport rep = classify(st.graphs);
    std::vector<VertexSet> disconnected =
        leaf_sccs_of_class(rep, LeafClass::MessageDisconnected);
    std::vector<VertexSet> degenerated = leaf_sccs_of_class(rep, LeafClass::SemiDegenerated);
    if (disconnected.empty() && degenerated.empty()) break;

    for (const VertexSet& scc : disconnected) append_dummy(st, scc);

    for (;;) {
      if (++passes > guard) throw std::logic_error("BreakLeafSCC failed to terminate");
      SccReport inner = classify(st.graphs);
      std::vector<VertexSet> deg = leaf_sccs_of_class(inner, LeafClass::SemiDegenerated);
      if (deg.empty()) break;
      break_one_degenerated(st, deg, chooser);
    }
  }
  return prunes;
}

int break_leaf_sccs(AlgorithmState& st, PruneLimit limit) {
  SmallestIndexChooser ch;
  return break_leaf_sccs(st, limit, ch);
}

// ---------------------------------------------------------------------------
// Algorithm 1

namespace {

void phase2_iteration(AlgorithmState& st, Chooser& chooser) {
  SccReport rep = classify(st.graphs);
  std::vector<VertexSet> semi;
  bool any_connected = false;
  for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
    switch (rep.classes[k]) {
      case LeafClass::MessageConnected: any_connected = true; break;
      case LeafClass::SemiNonDegenerated: semi.push_back(rep.leaf(k)); break;
      default: throw std::logic_error("unbroken leaf SCC entering phase 2 iteration");
    }
  }
  if (any_connected) {
    st.log.push_back(Step{StepKind::PruneOnce, st.phase, {}, std::nullopt, {}, {}, {}});
    break_leaf_sccs(st, PruneLimit::Once, chooser);
    return;
  }
  const VertexSet scc = semi[chooser.pick(semi.size())];
  st.log.push_back(Step{StepKind::SelectSemi, st.phase, scc, std::nullopt, {}, {}, {}});
  make_message_connected(st, scc);
  st.log.push_back(Step{StepKind::BreakAgain, st.phase, {}, std::nullopt, {}, {}, {}});
  if (break_leaf_sccs(st, PruneLimit::All, chooser) != 1) {
    throw std::logic_error("(iv-c) must prune exactly the SCC connected in (iv-b)");
  }
}

bool has_leaf_scc(const GraphPair& g) { return !scc_decompose(g).leaf_sccs.empty(); }

AlgorithmTrace run_deterministic(const GraphPair& g) {
  SmallestIndexChooser ch;
  AlgorithmTrace t{g, AlgorithmState(g)};
  t.n_connected = break_leaf_sccs(t.state, PruneLimit::All, ch);
  t.n_remaining = static_cast<int>(scc_decompose(t.state.graphs).leaf_sccs.size());
  t.state.phase = 2;
  while (has_leaf_scc(t.state.graphs)) {
    phase2_iteration(t.state, ch);
    ++t.n_iv;
  }
  return t;
}

// ----- exhaustive search over the arbitrary choices

struct BudgetExceeded {};

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void charge() {
    if (++used_ > limit_) throw BudgetExceeded{};
  }
  std::size_t used() const { return used_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

class ReplayChooser final : public Chooser {
 public:
  explicit ReplayChooser(std::vector<std::size_t> prefix) : prefix_(std::move(prefix)) {}

  std::size_t pick(std::size_t options) override {
    if (options == 0) throw std::logic_error("choice with no options");
    std::size_t i = picks_.size();
    std::size_t c = i < prefix_.size() ? prefix_[i] : 0;
    picks_.push_back(c);
    counts_.push_back(options);
    return c;
  }

  const std::vector<std::size_t>& picks() const { return picks_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

 private:
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> picks_;
  std::vector<std::size_t> counts_;
};

// Runs `run` once per distinct choice sequence (depth-first by re-execution).
template <class Run>
void for_each_choice_sequence(Run&& run, Budget& budget) {
  std::vector<std::size_t> prefix;
  for (;;) {
    budget.charge();
    ReplayChooser ch(prefix);
    run(ch);
    const auto& picks = ch.picks();
    const auto& counts = ch.counts();
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(picks.size()) - 1;
    while (i >= 0 && picks[i] + 1 >= counts[i]) --i;
    if (i < 0) return;
    prefix.assign(picks.begin(), picks.begin() + i);
    prefix.push_back(picks[i] + 1);
  }
}

struct Outcome {
  int n_iv = 0;
  std::vector<Step> log;  // steps from the memoized state onwards
  GraphPair final_graphs;
};

bool better(int n_iv, const std::vector<Step>& log, const Outcome& than) {
  return std::tie(n_iv, log) < std::tie(than.n_iv, than.log);
}

// Collects the distinct states reachable by one application of `step`,
// keeping the lexicographically smallest log per state.
template <class StepFn>
std::vector<AlgorithmState> successors(const AlgorithmState& from, StepFn&& step,
                                       Budget& budget) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<AlgorithmState> out;
  for_each_choice_sequence(
      [&](Chooser& ch) {
        AlgorithmState next = from;
        next.log.clear();
        step(next, ch);
        auto [it, fresh] = index.try_emplace(next.graphs.key(), out.size());
        if (fresh) {
          out.push_back(std::move(next));
        } else if (next.log < out[it->second].log) {
          out[it->second] = std::move(next);
        }
      },
      budget);
  return out;
}

class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(Budget& budget) : budget_(budget) {}

  const Outcome& best(const AlgorithmState& st) {
    std::string key = st.graphs.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    budget_.charge();

    Outcome result;
    if (!has_leaf_scc(st.graphs)) {
      result.final_graphs = st.graphs;
    } else {
      bool first = true;
      for (AlgorithmState& child : successors(st, phase2_iteration, budget_)) {
        const Outcome& sub = best(child);
        std::vector<Step> log = child.log;
        log.insert(log.end(), sub.log.begin(), sub.log.end());
        if (first || better(sub.n_iv + 1, log, result)) {
          result = Outcome{sub.n_iv + 1, std::move(log), sub.final_graphs};
          first = false;
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

 private:
  Budget& budget_;
  std::unordered_map<std::string, Outcome> memo_;
};

AlgorithmTrace run_exhaustive(const GraphPair& g, Budget& budget) {
  AlgorithmState init(g);
  int n_connected = 0;
  auto phase1 = successors(
      init,
      [&](AlgorithmState& st, Chooser& ch) {
        n_connected = break_leaf_sccs(st, PruneLimit::All, ch);
      },
      budget);

  ExhaustiveSearch search(budget);
  std::optional<AlgorithmTrace> best;
  for (AlgorithmState& after1 : phase1) {
    AlgorithmState st = after1;
    st.phase = 2;
    st.log.clear();
    const Outcome& sub = search.best(st);
    std::vector<Step> log = after1.log;
    log.insert(log.end(), sub.log.begin(), sub.log.end());
    if (best && std::tie(sub.n_iv, log) >= std::tie(best->n_iv, best->state.log)) continue;

    AlgorithmState final_state(g);
    final_state.graphs = sub.final_graphs;
    final_state.phase = 2;
    final_state.log = std::move(log);
    AlgorithmTrace t{g, std::move(final_state)};
    t.n_connected = n_connected;
    t.n_remaining = static_cast<int>(scc_decompose(after1.graphs).leaf_sccs.size());
    t.n_iv = sub.n_iv;
    best = std::move(t);
  }
  best->mode = SearchMode::Exhaustive;
  best->states_explored = budget.used();
  return std::move(*best);
}

}  // namespace

AlgorithmTrace run_algorithm1(const GraphPair& g, const AlgorithmOptions& opts) {
  if (opts.mode == SearchMode::Exhaustive) {
    Budget budget(opts.state_budget);
    try {
      return run_exhaustive(g, budget);
    } catch (const BudgetExceeded&) {
      AlgorithmTrace t = run_deterministic(g);
      t.mode = SearchMode::Exhaustive;
      t.fell_back = true;
      t.states_explored = budget.used();
      return t;
    }
  }
  return run_deterministic(g);
}

int lower_bound(const AlgorithmTrace& trace) {
  int bound = trace.initial.v_out() - (trace.n_connected + trace.n_iv);
  if (bound != trace.state.graphs.v_out()) {
    throw std::logic_error("step count disagrees with V_out of the final graph");
  }
  return bound;
}

int lower_bound_prune_all(const GraphPair& g) {
  GraphPair h = g;
  SccReport rep = scc_decompose(h);
  for (int c : rep.leaf_sccs) h.clear_out_arcs(rep.sccs[c].front());
  return h.v_out();
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const Step& s) {
  json j{{"tag", tag(s.kind)}, {"phase", s.phase}};
  if (!s.scc.empty()) j["scc"] = to_json_one_based(s.scc);
  if (s.vertex) j["vertex"] = *s.vertex + 1;
  if (!s.arcs_removed.empty()) j["arcs_removed"] = pairs_one_based(s.arcs_removed);
  if (!s.arcs_added.empty()) j["arcs_added"] = pairs_one_based(s.arcs_added);
  if (!s.edges_added.empty()) j["edges_added"] = pairs_one_based(s.edges_added);
  return j;
}

json to_json(const AlgorithmTrace& t, bool include_steps) {
  VertexSet dummies;
  for (Vertex v = t.state.base_vertices; v < t.state.graphs.size(); ++v) dummies.push_back(v);
  json j{
      {"mode", t.mode == SearchMode::Exhaustive ? "exhaustive" : "deterministic"},
      {"fell_back", t.fell_back},
      {"v_out", t.initial.v_out()},
      {"n_connected", t.n_connected},
      {"n_remaining", t.n_remaining},
      {"n_iv", t.n_iv},
      {"dummy_count", t.dummy_count()},
      {"lower_bound", lower_bound(t)},
  };
  if (t.mode == SearchMode::Exhaustive) j["states_explored"] = t.states_explored;
  if (include_steps) {
    json steps = json::array();
    for (const Step& s : t.state.log) steps.push_back(to_json(s));
    j["steps"] = std::move(steps);
    j["final"] = json{{"num_vertices", t.state.graphs.size()},
                      {"dummies", to_json_one_based(dummies)},
                      {"arcs", pairs_one_based(t.state.graphs.arcs())},
                      {"edges", pairs_one_based(t.state.graphs.edges())}};
  }
  return j;
}

}  // namespace msic
