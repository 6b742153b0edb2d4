#include <fstream>

#include "doctest.h"
#include "msic/code.hpp"
#include "msic/graphs.hpp"
#include "msic/verify.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace msic;
using fixtures::ob;
using nlohmann::json;

namespace {

LinearIndexCode three_way_code() {
  std::ifstream in(fixtures::data_file("ex_a_three_way_code.json"));
  return parse_code(json::parse(in), fixtures::ex_a());
}

LinearIndexCode rows_of(int m, std::vector<std::pair<int, gf2::Word>> rows) {
  LinearIndexCode c{m, {}};
  for (auto [s, w] : rows) c.rows.push_back({s, w, RowKind::Linear});
  return c;
}

gf2::Word word(std::initializer_list<int> one_based) {
  gf2::Word w = 0;
  for (int x : one_based) w |= gf2::unit(x - 1);
  return w;
}

std::vector<gf2::Word> coeffs(const LinearIndexCode& c) {
  std::vector<gf2::Word> out;
  for (const auto& r : c.rows) out.push_back(r.coeffs);
  return out;
}

int oracle_length(const ProblemInstance& inst, int jobs = 1) {
  OracleOptions o;
  o.jobs = jobs;
  OracleResult r = oracle_min_linear(inst, o);
  REQUIRE(r.found);
  return r.length;
}

}  // namespace

TEST_CASE("rank_decodable on the three-way code") {
  ProblemInstance a = fixtures::ex_a();
  LinearIndexCode code = three_way_code();
  DecodeResult r = rank_decodable(code, a);
  CHECK(r.decodable);
  CHECK_FALSE(r.failure.has_value());
  REQUIRE(r.certificate.size() == 6);
  for (Vertex i = 0; i < 6; ++i) {
    CHECK(r.certificate[i].receiver == i);
    CHECK(r.certificate[i].wanted == (i ^ 1));
  }
  CHECK(certificate_valid(code, a, r.certificate));

  DecodeCertificate broken = r.certificate;
  broken[0].rows.push_back(3);
  CHECK_FALSE(certificate_valid(code, a, broken));
  broken = r.certificate;
  broken[2].used_own = !broken[2].used_own;
  CHECK_FALSE(certificate_valid(code, a, broken));

  json j = to_json(r);
  CHECK(j["decodable"] == true);
  CHECK(j["schema"] == 1);
  for (const auto& e : j["certificate"])
    for (int row : e["rows"]) {
      CHECK(row >= 1);
      CHECK(row <= 4);
    }
}

TEST_CASE("rank_decodable on the planned code") {
  ProblemInstance inst = simplify(fixtures::ex_a()).instance;
  GraphPair g = build_graphs(inst);
  LinearIndexCode code = assign_senders(inst, plan_code(g, find_connecting_trees(g).trees));
  DecodeResult r = rank_decodable(code, inst);
  CHECK(r.decodable);
  CHECK(certificate_valid(code, inst, r.certificate));
}

TEST_CASE("rank_decodable reports the first failing pair") {
  // x1+x2 needs a sender holding both; decodability ignores who sends it.
  ProblemInstance a = fixtures::ex_a();
  std::vector<VertexSet> senders = a.senders();
  senders.push_back(ob({1, 2}));
  ProblemInstance relaxed(6, senders, a.wants());
  LinearIndexCode code = rows_of(6, {{4, word({1, 2})}});
  DecodeResult r = rank_decodable(code, relaxed);
  CHECK_FALSE(r.decodable);
  CHECK(r.certificate.empty());
  REQUIRE(r.failure.has_value());
  CHECK(*r.failure == std::pair<Vertex, Vertex>{2, 3});
  CHECK(to_json(r)["failure"] == json{{"receiver", 3}, {"wanted", 4}});

  CHECK_THROWS_AS(rank_decodable(rows_of(6, {{0, word({1, 2})}}), a), std::invalid_argument);
  CHECK_THROWS_AS(rank_decodable(rows_of(5, {}), a), std::invalid_argument);
}

TEST_CASE("verify_exhaustive examples") {
  CHECK(verify_exhaustive(three_way_code(), fixtures::ex_a()));
  CHECK_FALSE(verify_exhaustive(rows_of(6, {{0, word({1, 2})}}), fixtures::ex_a()));
  CHECK_FALSE(verify_exhaustive(rows_of(2, {{0, word({1})}}), fixtures::ex_c()));
  CHECK(verify_exhaustive(rows_of(2, {{0, word({1})}, {1, word({2})}}), fixtures::ex_c()));

  ProblemInstance quiet(3, {ob({1, 2, 3})}, {{}, {}, {}});
  CHECK(verify_exhaustive(rows_of(3, {}), quiet));

  std::vector<VertexSet> wants(21);
  ProblemInstance big(21, {[] {
                        VertexSet s;
                        for (int v = 0; v < 21; ++v) s.push_back(v);
                        return s;
                      }()},
                      wants);
  CHECK_THROWS_AS(verify_exhaustive(rows_of(21, {}), big), GuardError);
  LinearIndexCode long_code{3, std::vector<CodeRow>(63, CodeRow{0, 1, RowKind::Linear})};
  CHECK_THROWS_AS(verify_exhaustive(long_code, quiet), GuardError);
}

TEST_CASE("oracle examples") {
  OracleResult a = oracle_min_linear(fixtures::ex_a());
  CHECK(a.found);
  CHECK(a.length == 4);
  CHECK(a.searched_up_to == 4);
  CHECK(rank_decodable(a.code, fixtures::ex_a()).decodable);

  OracleResult b = oracle_min_linear(fixtures::ex_b());
  CHECK(b.length == 2);
  CHECK(coeffs(b.code) == std::vector<gf2::Word>{word({1, 2}), word({1, 3})});
  CHECK(coeffs(b.code) == brute::min_linear_code(fixtures::ex_b()));

  OracleResult c = oracle_min_linear(fixtures::ex_c());
  CHECK(c.length == 2);
  CHECK(coeffs(c.code) == std::vector<gf2::Word>{word({1}), word({2})});
  CHECK(c.code.rows[0].sender == 0);
  CHECK(c.code.rows[1].sender == 1);

  OracleOptions capped;
  capped.max_len = 3;
  OracleResult short_a = oracle_min_linear(fixtures::ex_a(), capped);
  CHECK_FALSE(short_a.found);
  CHECK(short_a.searched_up_to == 3);
  CHECK(to_json(short_a)["found"] == false);

  OracleOptions tight;
  tight.max_messages = 5;
  CHECK_THROWS_AS(oracle_min_linear(fixtures::ex_a(), tight), GuardError);
  tight.max_messages = 17;
  CHECK_THROWS_AS(oracle_min_linear(fixtures::ex_c(), tight), GuardError);
}

TEST_CASE("lemma consequence examples") {
  ProblemInstance c = simplify(fixtures::ex_c()).instance;
  LemmaReport rc = check_lemma_consequences(rows_of(2, {{0, word({1})}, {1, word({2})}}), c);
  CHECK(rc.ok());
  CHECK(rc.checked > 0);

  ProblemInstance path = simplify(ProblemInstance(2, {ob({1, 2})}, {{}, ob({1})})).instance;
  CHECK(check_lemma_consequences(rows_of(2, {{0, word({1})}}), path).ok());
  LemmaReport none = check_lemma_consequences(rows_of(2, {}), path);
  REQUIRE_FALSE(none.ok());
  bool l2 = false;
  for (const auto& v : none.violations) l2 = l2 || (v.lemma == 2 && v.message == 0);
  CHECK(l2);

  CHECK(check_lemma_consequences(three_way_code(), simplify(fixtures::ex_a()).instance).ok());

  LemmaReport bad = check_lemma_consequences(rows_of(2, {{0, word({1})}}), c);
  CHECK_FALSE(bad.ok());
  CHECK(to_json(bad)["ok"] == false);

  ProblemInstance unsimplified(3, {ob({1, 2, 3})}, {ob({2}), ob({1}), {}});
  CHECK_THROWS_AS(check_lemma_consequences(rows_of(3, {}), unsimplified), std::invalid_argument);
}

TEST_CASE("property: rank decoding agrees with simulation") {
  gen::Rng rng(909);
  int decodable = 0;
  for (int i = 0; i < 400; ++i) {
    ProblemInstance inst = gen::instance(rng, {2, 5, 4});
    LinearIndexCode code = gen::code(rng, inst);
    if (i % 3 == 0) {
      // Planned codes, sometimes with one row dropped, so both outcomes are common.
      ProblemInstance s = simplify(inst).instance;
      GraphPair g = build_graphs(s);
      code = assign_senders(s, plan_code(g, find_connecting_trees(g).trees));
      inst = s;
      if (!code.rows.empty() && gen::coin(rng, 0.5))
        code.rows.erase(code.rows.begin() + gen::uniform(rng, 0, code.rows.size() - 1));
    }
    DecodeResult r = rank_decodable(code, inst);
    CHECK(r.decodable == verify_exhaustive(code, inst));
    if (r.decodable) {
      ++decodable;
      CHECK(certificate_valid(code, inst, r.certificate));
    }
  }
  CHECK(decodable > 50);
  CHECK(decodable < 350);
}

TEST_CASE("property: oracle matches brute-force subset search") {
  gen::Rng rng(1001);
  for (int i = 0; i < 120; ++i) {
    ProblemInstance inst = gen::instance(rng, {2, 4, 3});
    OracleResult r = oracle_min_linear(inst);
    REQUIRE(r.found);
    std::vector<gf2::Word> expect = brute::min_linear_code(inst);
    CHECK(r.length == static_cast<int>(expect.size()));
    CHECK(coeffs(r.code) == expect);
    CHECK(support_violations(r.code, inst).empty());
  }
}

TEST_CASE("property: oracle invariances") {
  gen::Rng rng(1102);
  for (int i = 0; i < 80; ++i) {
    ProblemInstance inst = gen::instance(rng, {2, 5, 4});
    int len = oracle_length(inst);
    CHECK(oracle_length(simplify(inst).instance) == len);

    OracleOptions par;
    par.jobs = 3;
    OracleResult one = oracle_min_linear(inst);
    OracleResult three = oracle_min_linear(inst, par);
    CHECK(coeffs(one.code) == coeffs(three.code));
    CHECK(one.subspaces_visited == three.subspaces_visited);

    if (inst.num_senders() >= 2) {
      std::vector<VertexSet> senders = inst.senders();
      int a = gen::uniform(rng, 0, senders.size() - 1);
      int b = gen::uniform(rng, 0, senders.size() - 2);
      if (b >= a) ++b;
      senders[a] = set_union(senders[a], senders[b]);
      senders.erase(senders.begin() + b);
      ProblemInstance merged(inst.num_messages(), senders, inst.wants());
      CHECK(oracle_length(merged) <= len);
    }
  }
}

TEST_CASE("property: lemma consequences hold for decodable codes") {
  gen::Rng rng(1203);
  for (int i = 0; i < 150; ++i) {
    ProblemInstance inst = gen::simplified_instance(rng, {2, 5, 4});
    GraphPair g = build_graphs(inst);
    LinearIndexCode planned = assign_senders(inst, plan_code(g, find_connecting_trees(g).trees));
    LemmaReport p = check_lemma_consequences(planned, inst);
    CHECK(p.ok());
    OracleResult r = oracle_min_linear(inst);
    REQUIRE(r.found);
    CHECK(check_lemma_consequences(r.code, inst).ok());
  }
}
