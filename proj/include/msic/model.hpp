#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace msic {

/// Vertex / message / receiver index. Zero-based inside the library; every
/// external format (JSON, DOT, CLI output) uses one-based indices.
using Vertex = int;

/// Sorted, duplicate-free set of vertices.
using VertexSet = std::vector<Vertex>;

using Arc = std::pair<Vertex, Vertex>;   // (from, to)
using Edge = std::pair<Vertex, Vertex>;  // first < second

/// Malformed or invalid instance. `path()` is a JSON pointer to the
/// offending field ("/wants/0/1"), empty for document-level problems.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A size or resource guard was hit (too many messages for an exhaustive
/// routine, and similar).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Simplification;

/// Uniprior multicast problem: receiver r knows message r and wants W_r;
/// sender s owns M_s. Messages and receivers share the index space.
///
/// Instances are validated on construction and immutable afterwards.
class ProblemInstance {
 public:
  /// Validates and normalizes (sorts, dedups) the sets. Throws InstanceError.
  ProblemInstance(int num_messages, std::vector<VertexSet> senders,
                  std::vector<VertexSet> wants);

  int num_messages() const noexcept { return num_messages_; }
  int num_senders() const noexcept { return static_cast<int>(senders_.size()); }
  const std::vector<VertexSet>& senders() const noexcept { return senders_; }
  const VertexSet& sender(int s) const { return senders_.at(s); }
  const std::vector<VertexSet>& wants() const noexcept { return wants_; }
  const VertexSet& wants(Vertex r) const { return wants_.at(r); }

  /// True once unwanted messages have been stripped from all senders.
  bool simplified() const noexcept { return simplified_; }

  /// Messages held by at least one sender.
  VertexSet owned_messages() const;
  /// Messages wanted by at least one receiver.
  VertexSet wanted_messages() const;

  /// Senders owning every message in `msgs`, ascending.
  std::vector<int> owners_of(const VertexSet& msgs) const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;

 private:
  struct SimplifiedTag {};
  ProblemInstance(SimplifiedTag, int num_messages,
                  std::vector<VertexSet> senders, std::vector<VertexSet> wants);

  int num_messages_ = 0;
  std::vector<VertexSet> senders_;
  std::vector<VertexSet> wants_;
  bool simplified_ = false;

  friend Simplification simplify(const ProblemInstance& inst);
};

ProblemInstance parse_instance_text(std::string_view text);
ProblemInstance parse_instance(const nlohmann::json& doc);
/// Throws InstanceError with an empty path when the file cannot be read.
ProblemInstance load_instance(const std::filesystem::path& path);

nlohmann::json to_json(const ProblemInstance& inst);

struct Simplification {
  ProblemInstance instance;
  VertexSet removed;  // messages stripped from the senders
};

/// Strips every message nobody wants from all sender sets. Receivers and
/// sender slots are kept, so indices stay stable. Idempotent.
Simplification simplify(const ProblemInstance& inst);

/// Information-flow digraph G and message graph U over a shared vertex set.
/// Arc (i -> j): receiver j wants x_i. Edge (i, j): some sender owns both.
class GraphPair {
 public:
  GraphPair() = default;
  explicit GraphPair(int n);

  int size() const noexcept { return static_cast<int>(out_.size()); }

  Vertex add_vertex();

  void add_arc(Vertex from, Vertex to);
  void remove_arc(Vertex from, Vertex to);
  /// Removes every arc leaving `v`; returns the removed arcs.
  std::vector<Arc> clear_out_arcs(Vertex v);
  void add_edge(Vertex a, Vertex b);

  bool has_arc(Vertex from, Vertex to) const;
  bool has_edge(Vertex a, Vertex b) const;

  const VertexSet& out(Vertex v) const { return out_.at(v); }
  const VertexSet& in(Vertex v) const { return in_.at(v); }
  const VertexSet& neighbors(Vertex v) const { return nbr_.at(v); }

  bool is_leaf(Vertex v) const { return out_.at(v).empty(); }
  /// Number of non-leaf vertices.
  int v_out() const;

  std::vector<Arc> arcs() const;    // lexicographic
  std::vector<Edge> edges() const;  // lexicographic, first < second
  std::size_t arc_count() const;
  std::size_t edge_count() const;

  /// Compact string identifying (n, arcs, edges); used as a memo key.
  std::string key() const;

  friend bool operator==(const GraphPair&, const GraphPair&) = default;

 private:
  void check(Vertex v) const;

  std::vector<VertexSet> out_;
  std::vector<VertexSet> in_;
  std::vector<VertexSet> nbr_;
};

/// Builds (G, U). Requires a simplified instance.
GraphPair build_graphs(const ProblemInstance& inst);

/// Sorted-set helpers shared across modules.
bool contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& sub, const VertexSet& super);
void normalize(VertexSet& s);

/// Converts a zero-based set to a JSON array of one-based indices.
nlohmann::json to_json_one_based(const VertexSet& s);
/// Arcs or edges as one-based [a, b] pairs.
nlohmann::json pairs_one_based(const std::vector<std::pair<Vertex, Vertex>>& ps);

}  // namespace msic
