#include "msic/report.hpp"

#include <sstream>

namespace msic {

using nlohmann::json;

bool Report::certified() const {
  return lower == upper() || (oracle && oracle->found && oracle->length == lower);
}

bool Report::consistent() const {
  if (!decode.decodable || lower > upper()) return false;
  if (oracle && oracle->found) return lower <= oracle->length && oracle->length <= upper();
  return true;
}

Report build_report(const ProblemInstance& inst, const ReportOptions& opts) {
  Simplification simp = simplify(inst);
  GraphPair g = build_graphs(simp.instance);
  SccReport scc = classify(g);
  AlgorithmOptions aopts;
  aopts.mode = opts.exhaustive ? SearchMode::Exhaustive : SearchMode::Deterministic;
  AlgorithmTrace trace = run_algorithm1(g, aopts);
  int lower = lower_bound(trace);
  TreeFamily trees = find_connecting_trees(g, opts.trees);
  CodeBlueprint plan = plan_code(g, trees.trees);
  LinearIndexCode code = assign_senders(simp.instance, plan);
  DecodeResult decode = rank_decodable(code, simp.instance);
  std::optional<OracleResult> oracle;
  if (opts.oracle) {
    OracleOptions o;
    o.jobs = opts.jobs;
    o.max_messages = opts.oracle_max_messages;
    oracle = oracle_min_linear(simp.instance, o);
  }
  return Report{inst,          std::move(simp),  std::move(g),    std::move(scc),
                std::move(trace), lower,         std::move(trees), std::move(plan),
                std::move(code),  std::move(decode), std::move(oracle), opts.include_trace};
}

json to_json(const SccReport& rep) {
  json sccs = json::array();
  for (const auto& s : rep.sccs) sccs.push_back(to_json_one_based(s));
  json leaves = json::array();
  for (std::size_t k = 0; k < rep.leaf_sccs.size(); ++k) {
    json e{{"vertices", to_json_one_based(rep.leaf(k))}};
    if (k < rep.classes.size()) e["class"] = to_string(rep.classes[k]);
    if (k < rep.witnesses.size() && rep.witnesses[k]) {
      const DegeneracyWitness& w = *rep.witnesses[k];
      json wj{{"part", to_json_one_based(w.part)}, {"outside", to_json_one_based(w.outside)}};
      if (w.non_leaf) wj["non_leaf"] = *w.non_leaf + 1;
      e["witness"] = std::move(wj);
    }
    leaves.push_back(std::move(e));
  }
  return json{{"sccs", std::move(sccs)}, {"leaf_sccs", std::move(leaves)}};
}

json to_json(const ConnectingTree& t) {
  return json{{"vertices", to_json_one_based(t.vertices)}, {"edges", pairs_one_based(t.edges)}};
}

json to_json(const Report& r) {
  json trees = json::array();
  for (const auto& t : r.trees.trees) trees.push_back(to_json(t));
  json out{
      {"schema", 1},
      {"instance",
       {{"num_messages", r.original.num_messages()},
        {"num_senders", r.original.num_senders()},
        {"removed_unwanted", to_json_one_based(r.simplified.removed)}}},
      {"v_out", r.graphs.v_out()},
      {"classification", to_json(r.scc)},
      {"n_connected", r.trace.n_connected},
      {"n_remaining", r.trace.n_remaining},
      {"n_iv", r.trace.n_iv},
      {"lower_bound", r.lower},
      {"n_tree", r.trees.size()},
      {"trees_exact", r.trees.exact},
      {"connecting_trees", std::move(trees)},
      {"upper_bound", r.upper()},
      {"code", to_json(r.code)},
      {"code_decodable", r.decode.decodable},
  };
  if (r.oracle) out["oracle"] = to_json(*r.oracle);
  out["certified"] = r.certified();
  out["consistent"] = r.consistent();
  if (r.include_trace) out["trace"] = to_json(r.trace, true);
  return out;
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "messages       " << r.original.num_messages() << "\n"
     << "senders        " << r.original.num_senders() << "\n"
     << "V_out          " << r.graphs.v_out() << "\n"
     << "leaf SCCs\n";
  for (std::size_t k = 0; k < r.scc.leaf_sccs.size(); ++k) {
    os << "  {";
    const VertexSet& s = r.scc.leaf(k);
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
    os << "}  " << to_string(r.scc.classes[k]) << "\n";
  }
  os << "n_connected    " << r.trace.n_connected << "\n"
     << "n_remaining    " << r.trace.n_remaining << "\n"
     << "n_iv           " << r.trace.n_iv << "\n"
     << "lower bound    " << r.lower << "\n"
     << "n_tree         " << r.trees.size() << (r.trees.exact ? "" : " (greedy)") << "\n"
     << "upper bound    " << r.upper() << "\n"
     << "code decodes   " << (r.decode.decodable ? "yes" : "no") << "\n";
  if (r.oracle) {
    os << "linear optimum ";
    if (r.oracle->found) {
      os << r.oracle->length;
    } else {
      os << "> " << r.oracle->searched_up_to;
    }
    os << "\n";
  }
  os << "certified      " << (r.certified() ? "yes" : "no") << "\n";
  if (!r.consistent()) os << "INCONSISTENT\n";
  return os.str();
}

}  // namespace msic
