#include "msic/model.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace msic {

using nlohmann::json;

void normalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(r));
  return r;
}

bool is_subset(const VertexSet& sub, const VertexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

json to_json_one_based(const VertexSet& s) {
  json arr = json::array();
  for (Vertex v : s) arr.push_back(v + 1);
  return arr;
}

json pairs_one_based(const std::vector<std::pair<Vertex, Vertex>>& ps) {
  json arr = json::array();
  for (auto [a, b] : ps) arr.push_back({a + 1, b + 1});
  return arr;
}

// ---------------------------------------------------------------------------
// ProblemInstance

namespace {

std::string field(const char* name, std::size_t i) {
  return "/" + std::string(name) + "/" + std::to_string(i);
}

std::string field(const char* name, std::size_t i, std::size_t j) {
  return field(name, i) + "/" + std::to_string(j);
}

void check_common(int m, std::vector<VertexSet>& senders,
                  std::vector<VertexSet>& wants) {
  if (m < 1) throw InstanceError("/num_messages", "must be a positive integer");
  if (senders.empty()) throw InstanceError("/senders", "at least one sender is required");
  if (static_cast<int>(wants.size()) != m) {
    throw InstanceError("/wants", "expected " + std::to_string(m) +
                                      " receiver entries, got " +
                                      std::to_string(wants.size()));
  }
  for (std::size_t s = 0; s < senders.size(); ++s) {
    for (std::size_t k = 0; k < senders[s].size(); ++k) {
      Vertex v = senders[s][k];
      if (v < 0 || v >= m) {
        throw InstanceError(field("senders", s, k),
                            "message index " + std::to_string(v + 1) + " out of range");
      }
    }
    normalize(senders[s]);
  }
  for (std::size_t r = 0; r < wants.size(); ++r) {
    for (std::size_t k = 0; k < wants[r].size(); ++k) {
      Vertex v = wants[r][k];
      if (v < 0 || v >= m) {
        throw InstanceError(field("wants", r, k),
                            "message index " + std::to_string(v + 1) + " out of range");
      }
      if (v == static_cast<Vertex>(r)) {
        throw InstanceError(field("wants", r, k),
                            "receiver " + std::to_string(r + 1) +
                                " wants its own message (self-want)");
      }
    }
    normalize(wants[r]);
  }
}

}  // namespace

ProblemInstance::ProblemInstance(int num_messages, std::vector<VertexSet> senders,
                                 std::vector<VertexSet> wants)
    : num_messages_(num_messages),
      senders_(std::move(senders)),
      wants_(std::move(wants)) {
  check_common(num_messages_, senders_, wants_);
  for (std::size_t s = 0; s < senders_.size(); ++s) {
    if (senders_[s].empty()) throw InstanceError(field("senders", s), "empty sender set");
  }
  VertexSet owned = owned_messages();
  if (static_cast<int>(owned.size()) != num_messages_) {
    VertexSet all(num_messages_);
    for (int i = 0; i < num_messages_; ++i) all[i] = i;
    Vertex missing = set_difference(all, owned).front();
    throw InstanceError("/senders", "message " + std::to_string(missing + 1) +
                                        " is not held by any sender");
  }
}

ProblemInstance::ProblemInstance(SimplifiedTag, int num_messages,
                                 std::vector<VertexSet> senders,
                                 std::vector<VertexSet> wants)
    : num_messages_(num_messages),
      senders_(std::move(senders)),
      wants_(std::move(wants)),
      simplified_(true) {
  check_common(num_messages_, senders_, wants_);
}

VertexSet ProblemInstance::owned_messages() const {
  VertexSet r;
  for (const auto& s : senders_) r.insert(r.end(), s.begin(), s.end());
  normalize(r);
  return r;
}

VertexSet ProblemInstance::wanted_messages() const {
  VertexSet r;
  for (const auto& w : wants_) r.insert(r.end(), w.begin(), w.end());
  normalize(r);
  return r;
}

std::vector<int> ProblemInstance::owners_of(const VertexSet& msgs) const {
  std::vector<int> r;
  for (int s = 0; s < num_senders(); ++s) {
    if (is_subset(msgs, senders_[s])) r.push_back(s);
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::vector<VertexSet> read_index_lists(const json& doc, const char* name) {
  std::string path = std::string("/") + name;
  if (!doc.contains(name)) throw InstanceError(path, "missing field");
  const json& arr = doc.at(name);
  if (!arr.is_array()) throw InstanceError(path, "expected an array of arrays");
  std::vector<VertexSet> lists;
  lists.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& inner = arr[i];
    if (!inner.is_array()) throw InstanceError(field(name, i), "expected an array");
    VertexSet set;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      if (!inner[k].is_number_integer()) {
        throw InstanceError(field(name, i, k), "expected an integer");
      }
      // One-based on the wire.
      set.push_back(inner[k].get<int>() - 1);
    }
    lists.push_back(std::move(set));
  }
  return lists;
}

}  // namespace

ProblemInstance parse_instance(const json& doc) {
  if (!doc.is_object()) throw InstanceError("", "instance document must be a JSON object");
  if (doc.contains("schema")) {
    const json& schema = doc.at("schema");
    if (!schema.is_number_integer() || schema.get<int>() != 1) {
      throw InstanceError("/schema", "unsupported schema version");
    }
  }
  if (!doc.contains("num_messages")) throw InstanceError("/num_messages", "missing field");
  const json& m = doc.at("num_messages");
  if (!m.is_number_integer()) throw InstanceError("/num_messages", "expected an integer");
  auto senders = read_index_lists(doc, "senders");
  auto wants = read_index_lists(doc, "wants");
  return ProblemInstance(m.get<int>(), std::move(senders), std::move(wants));
}

ProblemInstance parse_instance_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(doc);
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

json to_json(const ProblemInstance& inst) {
  json senders = json::array();
  for (const auto& s : inst.senders()) senders.push_back(to_json_one_based(s));
  json wants = json::array();
  for (const auto& w : inst.wants()) wants.push_back(to_json_one_based(w));
  return json{{"schema", 1},
              {"num_messages", inst.num_messages()},
              {"senders", std::move(senders)},
              {"wants", std::move(wants)}};
}

// ---------------------------------------------------------------------------
// simplify

Simplification simplify(const ProblemInstance& inst) {
  VertexSet wanted = inst.wanted_messages();
  VertexSet removed = set_difference(inst.owned_messages(), wanted);
  std::vector<VertexSet> senders;
  senders.reserve(inst.senders().size());
  for (const auto& s : inst.senders()) senders.push_back(set_difference(s, removed));
  return Simplification{
      ProblemInstance(ProblemInstance::SimplifiedTag{}, inst.num_messages(),
                      std::move(senders), inst.wants()),
      std::move(removed)};
}

// ---------------------------------------------------------------------------
// GraphPair

namespace {

void insert_sorted(VertexSet& s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
}

void erase_sorted(VertexSet& s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it != s.end() && *it == v) s.erase(it);
}

}  // namespace

GraphPair::GraphPair(int n) : out_(n), in_(n), nbr_(n) {}

void GraphPair::check(Vertex v) const {
  if (v < 0 || v >= size()) throw std::out_of_range("vertex index out of range");
}

Vertex GraphPair::add_vertex() {
  out_.emplace_back();
  in_.emplace_back();
  nbr_.emplace_back();
  return size() - 1;
}

void GraphPair::add_arc(Vertex from, Vertex to) {
  check(from);
  check(to);
  if (from == to) throw std::invalid_argument("self-loop arc");
  insert_sorted(out_[from], to);
  insert_sorted(in_[to], from);
}

void GraphPair::remove_arc(Vertex from, Vertex to) {
  check(from);
  check(to);
  erase_sorted(out_[from], to);
  erase_sorted(in_[to], from);
}

std::vector<Arc> GraphPair::clear_out_arcs(Vertex v) {
  check(v);
  std::vector<Arc> removed;
  for (Vertex to : out_[v]) {
    removed.emplace_back(v, to);
    erase_sorted(in_[to], v);
  }
  out_[v].clear();
  return removed;
}

void GraphPair::add_edge(Vertex a, Vertex b) {
  check(a);
  check(b);
  if (a == b) throw std::invalid_argument("self-loop edge");
  insert_sorted(nbr_[a], b);
  insert_sorted(nbr_[b], a);
}

bool GraphPair::has_arc(Vertex from, Vertex to) const {
  check(from);
  check(to);
  return contains(out_[from], to);
}

bool GraphPair::has_edge(Vertex a, Vertex b) const {
  check(a);
  check(b);
  return contains(nbr_[a], b);
}

int GraphPair::v_out() const {
  return static_cast<int>(
      std::count_if(out_.begin(), out_.end(), [](const VertexSet& o) { return !o.empty(); }));
}

std::vector<Arc> GraphPair::arcs() const {
  std::vector<Arc> r;
  for (Vertex v = 0; v < size(); ++v) {
    for (Vertex w : out_[v]) r.emplace_back(v, w);
  }
  return r;
}

std::vector<Edge> GraphPair::edges() const {
  std::vector<Edge> r;
  for (Vertex v = 0; v < size(); ++v) {
    for (Vertex w : nbr_[v]) {
      if (v < w) r.emplace_back(v, w);
    }
  }
  return r;
}

std::size_t GraphPair::arc_count() const {
  std::size_t c = 0;
  for (const auto& o : out_) c += o.size();
  return c;
}

std::size_t GraphPair::edge_count() const {
  std::size_t c = 0;
  for (const auto& n : nbr_) c += n.size();
  return c / 2;
}

std::string GraphPair::key() const {
  std::string k = std::to_string(size());
  k += 'A';
  for (auto [a, b] : arcs()) {
    k += std::to_string(a);
    k += '>';
    k += std::to_string(b);
    k += ',';
  }
  k += 'E';
  for (auto [a, b] : edges()) {
    k += std::to_string(a);
    k += '-';
    k += std::to_string(b);
    k += ',';
  }
  return k;
}

GraphPair build_graphs(const ProblemInstance& inst) {
  if (!inst.simplified()) {
    throw std::invalid_argument("build_graphs requires a simplified instance");
  }
  GraphPair g(inst.num_messages());
  for (Vertex r = 0; r < inst.num_messages(); ++r) {
    for (Vertex i : inst.wants(r)) g.add_arc(i, r);
  }
  for (const auto& s : inst.senders()) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) g.add_edge(s[a], s[b]);
    }
  }
  return g;
}

}  // namespace msic
