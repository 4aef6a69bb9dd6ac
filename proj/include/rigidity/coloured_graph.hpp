#ifndef RIGIDITY_COLOURED_GRAPH_HPP
#define RIGIDITY_COLOURED_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rigidity {

enum class Colour : std::uint8_t { blue = 0, red = 1 };

inline Colour other(Colour c) { return c == Colour::blue ? Colour::red : Colour::blue; }

inline char colour_code(Colour c) { return c == Colour::blue ? 'b' : 'r'; }

inline Colour colour_from_code(std::string_view s) {
  if (s == "b") return Colour::blue;
  if (s == "r") return Colour::red;
  throw std::invalid_argument("colour code must be \"b\" or \"r\", got \"" + std::string(s) + "\"");
}

// endpoints are kept normalized with u <= v
struct ColouredEdge {
  int u = 0;
  int v = 0;
  Colour colour = Colour::blue;

  friend auto operator<=>(const ColouredEdge&, const ColouredEdge&) = default;
};

inline ColouredEdge edge(int u, int v, Colour c) {
  if (u > v) std::swap(u, v);
  return ColouredEdge{u, v, c};
}

// multigraph on vertices 0..n-1; at most one edge per (pair, colour); loops representable
class BiColouredMultigraph {
 public:
  BiColouredMultigraph() = default;

  explicit BiColouredMultigraph(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
  }

  BiColouredMultigraph(int n, std::vector<ColouredEdge> es) : BiColouredMultigraph(n) {
    for (const auto& e : es) add_edge(e.u, e.v, e.colour);
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<ColouredEdge>& edges() const { return edges_; }

  void add_edge(int u, int v, Colour c) {
    ColouredEdge e = edge(u, v, c);
    if (e.u < 0 || e.v >= n_)
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(u) + "," +
                                  std::to_string(v) + ") with n=" + std::to_string(n_));
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e)
      throw std::invalid_argument("duplicate monochrome edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + "," + colour_code(c) + ")");
    edges_.insert(it, e);
  }

  void remove_edge(int u, int v, Colour c) {
    ColouredEdge e = edge(u, v, c);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  "," + colour_code(c) + ") not present");
    edges_.erase(it);
  }

  bool has_edge(int u, int v, Colour c) const {
    ColouredEdge e = edge(u, v, c);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  bool has_pair(int u, int v) const {
    return has_edge(u, v, Colour::blue) || has_edge(u, v, Colour::red);
  }

  bool has_loops() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const ColouredEdge& e) { return e.u == e.v; });
  }

  // loops count twice, as usual
  int degree(int v) const {
    int d = 0;
    for (const auto& e : edges_) {
      if (e.u == v) ++d;
      if (e.v == v) ++d;
    }
    return d;
  }

  std::vector<ColouredEdge> incident_edges(int v) const {
    std::vector<ColouredEdge> out;
    for (const auto& e : edges_)
      if (e.u == v || e.v == v) out.push_back(e);
    return out;
  }

  int add_vertex() { return n_++; }

  // removes v and its edges; ids above v shift down by one
  BiColouredMultigraph without_vertex(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("vertex out of range");
    BiColouredMultigraph g(n_ - 1);
    for (const auto& e : edges_) {
      if (e.u == v || e.v == v) continue;
      g.add_edge(e.u - (e.u > v ? 1 : 0), e.v - (e.v > v ? 1 : 0), e.colour);
    }
    return g;
  }

  // perm[i] is the new id of vertex i
  BiColouredMultigraph relabelled(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != n_)
      throw std::invalid_argument("relabelling size must equal vertex count");
    std::vector<bool> seen(n_, false);
    for (int p : perm) {
      if (p < 0 || p >= n_ || seen[p]) throw std::invalid_argument("relabelling is not a permutation");
      seen[p] = true;
    }
    BiColouredMultigraph g(n_);
    for (const auto& e : edges_) g.add_edge(perm[e.u], perm[e.v], e.colour);
    return g;
  }

  friend bool operator==(const BiColouredMultigraph&, const BiColouredMultigraph&) = default;

 private:
  int n_ = 0;
  std::vector<ColouredEdge> edges_;  // sorted by (u, v, colour)
};

struct Subgraph {
  std::vector<int> vertices;        // sorted, distinct
  std::vector<ColouredEdge> edges;  // sorted, endpoints within vertices
};

inline int deficiency(const Subgraph& h) {
  return 2 * static_cast<int>(h.vertices.size()) - static_cast<int>(h.edges.size());
}

inline int deficiency(const BiColouredMultigraph& g) {
  return 2 * g.vertex_count() - g.edge_count();
}

inline Subgraph monochrome(const BiColouredMultigraph& g, Colour c) {
  Subgraph h;
  h.vertices.resize(g.vertex_count());
  for (int i = 0; i < g.vertex_count(); ++i) h.vertices[i] = i;
  for (const auto& e : g.edges())
    if (e.colour == c) h.edges.push_back(e);
  return h;
}

inline BiColouredMultigraph complete_bicoloured(int n, bool with_loops) {
  if (n < 1) throw std::invalid_argument("complete graph needs at least one vertex");
  BiColouredMultigraph g(n);
  for (int u = 0; u < n; ++u) {
    if (with_loops) {
      g.add_edge(u, u, Colour::blue);
      g.add_edge(u, u, Colour::red);
    }
    for (int v = u + 1; v < n; ++v) {
      g.add_edge(u, v, Colour::blue);
      g.add_edge(u, v, Colour::red);
    }
  }
  return g;
}

inline nlohmann::ordered_json graph_to_json(const BiColouredMultigraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.vertex_count();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges())
    edges.push_back({e.u, e.v, std::string(1, colour_code(e.colour))});
  j["edges"] = edges;
  return j;
}

inline BiColouredMultigraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw std::invalid_argument("graph json must be an object with \"n\" and \"edges\"");
  if (!j["n"].is_number_integer()) throw std::invalid_argument("\"n\" must be an integer");
  int n = j["n"].get<int>();
  if (n < 0) throw std::invalid_argument("\"n\" must be non-negative");
  if (!j["edges"].is_array()) throw std::invalid_argument("\"edges\" must be an array");
  BiColouredMultigraph g(n);
  for (const auto& item : j["edges"]) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_string())
      throw std::invalid_argument("each edge must be [u, v, \"b\"|\"r\"]");
    g.add_edge(item[0].get<int>(), item[1].get<int>(), colour_from_code(item[2].get<std::string>()));
  }
  return g;
}

inline std::string serialize_graph(const BiColouredMultigraph& g) { return graph_to_json(g).dump(); }

inline BiColouredMultigraph parse_graph(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed graph text: ") + e.what());
  }
  return graph_from_json(j);
}

inline nlohmann::ordered_json subgraph_to_json(const Subgraph& h) {
  nlohmann::ordered_json j;
  j["vertices"] = h.vertices;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : h.edges)
    edges.push_back({e.u, e.v, std::string(1, colour_code(e.colour))});
  j["edges"] = edges;
  return j;
}

}  // namespace rigidity

#endif
