#pragma once

#include <initializer_list>
#include <string>

#include "msic/model.hpp"

namespace fixtures {

using msic::ProblemInstance;
using msic::VertexSet;

/// One-based literal to a zero-based sorted set.
inline VertexSet ob(std::initializer_list<int> xs) {
  VertexSet s;
  for (int x : xs) s.push_back(x - 1);
  msic::normalize(s);
  return s;
}

inline msic::Edge edge(int a, int b) { return {a - 1, b - 1}; }
inline msic::Arc arc(int a, int b) { return {a - 1, b - 1}; }

// Three 2-cycles, four senders with overlapping triples.
inline ProblemInstance ex_a() {
  return ProblemInstance(6, {ob({1, 3, 5}), ob({2, 3, 5}), ob({2, 4, 5}), ob({2, 4, 6})},
                         {ob({2}), ob({1}), ob({4}), ob({3}), ob({6}), ob({5})});
}

// Directed 3-cycle, one sender holding everything.
inline ProblemInstance ex_b() {
  return ProblemInstance(3, {ob({1, 2, 3})}, {ob({3}), ob({1}), ob({2})});
}

// Two receivers swapping messages held by separate senders.
inline ProblemInstance ex_c() { return ProblemInstance(2, {ob({1}), ob({2})}, {ob({2}), ob({1})}); }

inline std::string data_file(const std::string& name) {
  return std::string(MSIC_DATA_DIR) + "/" + name;
}

}  // namespace fixtures
