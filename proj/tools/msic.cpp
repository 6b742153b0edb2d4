// msic: bounds and codes for multi-sender uniprior index coding instances.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "msic/bound.hpp"
#include "msic/code.hpp"
#include "msic/graphs.hpp"
#include "msic/model.hpp"
#include "msic/report.hpp"
#include "msic/verify.hpp"

namespace {

using nlohmann::json;
using namespace msic;

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError("", path + ": malformed JSON: " + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json with_schema(json j) {
  json out{{"schema", 1}};
  for (auto& [k, v] : j.items()) out[k] = v;
  return out;
}

struct Loaded {
  Simplification simp;
  GraphPair graphs;
};

Loaded load(const std::string& path) {
  ProblemInstance inst = load_instance(path);
  Simplification simp = simplify(inst);
  GraphPair g = build_graphs(simp.instance);
  return Loaded{std::move(simp), std::move(g)};
}

AlgorithmOptions algorithm_options(bool exhaustive, std::size_t budget) {
  AlgorithmOptions o;
  o.mode = exhaustive ? SearchMode::Exhaustive : SearchMode::Deterministic;
  o.state_budget = budget;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds and codes for multi-sender uniprior index coding"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for the oracle")->check(CLI::Range(1, 256));

  std::string instance_path, code_path, format = "json";
  bool exhaustive = false, trace = false, simulate = false, lemmas = false, with_oracle = false;
  bool final_graph = false, greedy = false;
  std::size_t budget = AlgorithmOptions{}.state_budget;
  int max_len = -1, max_messages = OracleOptions{}.max_messages;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", instance_path, "Instance JSON file")->required();
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_flag("--exhaustive", exhaustive, "Explore every choice sequence for the fewest steps");
    sub->add_option("--budget", budget, "State budget for --exhaustive");
  };

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  add_instance(validate);
  auto* simplify_cmd = app.add_subcommand("simplify", "Strip messages nobody wants");
  add_instance(simplify_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "SCCs and leaf SCC classes");
  add_instance(classify_cmd);
  auto* bound = app.add_subcommand("bound", "Lower bound by breaking leaf SCCs");
  add_instance(bound);
  add_search(bound);
  bound->add_flag("--trace", trace, "Include the step log and final graphs");
  auto* code = app.add_subcommand("code", "Pairwise XOR code from connecting trees");
  add_instance(code);
  code->add_flag("--greedy", greedy, "Greedy connecting trees instead of exact packing");
  auto* verify = app.add_subcommand("verify", "Check a code against an instance");
  add_instance(verify);
  verify->add_option("code", code_path, "Code JSON file")->required();
  verify->add_flag("--simulate", simulate, "Also simulate every message assignment");
  verify->add_flag("--lemmas", lemmas, "Also check the predecessor rank facts");
  auto* oracle = app.add_subcommand("oracle", "Shortest linear code by exhaustive search");
  add_instance(oracle);
  oracle->add_option("--max-len", max_len, "Longest code length to try");
  oracle->add_option("--max-messages", max_messages, "Message count guard")
      ->check(CLI::Range(0, 16));
  auto* report = app.add_subcommand("report", "Full pipeline summary");
  add_instance(report);
  add_search(report);
  report->add_flag("--oracle", with_oracle, "Run the linear oracle");
  report->add_option("--max-messages", max_messages, "Oracle message count guard")
      ->check(CLI::Range(0, 16));
  report->add_flag("--trace", trace, "Include the step log");
  report->add_flag("--greedy", greedy, "Greedy connecting trees");
  report->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  auto* dot = app.add_subcommand("dot", "Graphviz rendering of G and U");
  add_instance(dot);
  add_search(dot);
  dot->add_flag("--final", final_graph, "Render the graphs after the algorithm, dummies dashed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  TreeSearchOptions tree_opts;
  tree_opts.mode = greedy ? TreeSearch::Greedy : TreeSearch::Exact;

  try {
    if (*validate) {
      ProblemInstance inst = load_instance(instance_path);
      emit(json{{"schema", 1},
                {"valid", true},
                {"num_messages", inst.num_messages()},
                {"num_senders", inst.num_senders()}});
    } else if (*simplify_cmd) {
      Simplification s = simplify(load_instance(instance_path));
      json j = to_json(s.instance);
      j["removed"] = to_json_one_based(s.removed);
      emit(j);
    } else if (*classify_cmd) {
      Loaded l = load(instance_path);
      SccReport rep = classify(l.graphs);
      json j = with_schema(to_json(rep));
      j["v_out"] = l.graphs.v_out();
      emit(j);
    } else if (*bound) {
      Loaded l = load(instance_path);
      AlgorithmTrace t = run_algorithm1(l.graphs, algorithm_options(exhaustive, budget));
      emit(with_schema(to_json(t, trace)));
    } else if (*code) {
      Loaded l = load(instance_path);
      TreeFamily trees = find_connecting_trees(l.graphs, tree_opts);
      CodeBlueprint plan = plan_code(l.graphs, trees.trees);
      json j = to_json(assign_senders(l.simp.instance, plan));
      json tj = json::array();
      for (const auto& t : trees.trees) tj.push_back(to_json(t));
      j["connecting_trees"] = std::move(tj);
      j["trees_exact"] = trees.exact;
      j["upper_bound"] = plan.length();
      emit(j);
    } else if (*verify) {
      ProblemInstance inst = load_instance(instance_path);
      LinearIndexCode c = parse_code(read_json_file(code_path), inst);
      json j = to_json(rank_decodable(c, inst));
      if (simulate) j["simulation"] = verify_exhaustive(c, inst);
      if (lemmas) {
        Simplification s = simplify(inst);
        bool fits = support_violations(c, s.instance).empty();
        j["lemmas"] = fits ? to_json(check_lemma_consequences(c, s.instance))
                           : json{{"skipped", "code uses messages nobody wants"}};
      }
      emit(j);
    } else if (*oracle) {
      Simplification s = simplify(load_instance(instance_path));
      OracleOptions o;
      o.max_len = max_len;
      o.max_messages = max_messages;
      o.jobs = jobs;
      emit(to_json(oracle_min_linear(s.instance, o)));
    } else if (*report) {
      ReportOptions o;
      o.oracle = with_oracle;
      o.exhaustive = exhaustive;
      o.include_trace = trace;
      o.jobs = jobs;
      o.oracle_max_messages = max_messages;
      o.trees = tree_opts;
      Report r = build_report(load_instance(instance_path), o);
      if (format == "text") {
        std::cout << to_text(r);
      } else {
        emit(to_json(r));
      }
    } else if (*dot) {
      Loaded l = load(instance_path);
      if (final_graph) {
        AlgorithmTrace t = run_algorithm1(l.graphs, algorithm_options(exhaustive, budget));
        DotOptions d;
        d.first_dummy = t.state.base_vertices;
        std::cout << to_dot(t.state.graphs, d);
      } else {
        std::cout << to_dot(l.graphs);
      }
    }
  } catch (const GuardError& e) {
    std::cerr << "msic: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "msic: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
