#ifndef RIGIDITY_MOVES_HPP
#define RIGIDITY_MOVES_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "rigidity/coloured_graph.hpp"
#include "rigidity/random.hpp"
#include "rigidity/sparsity.hpp"

namespace rigidity {

// the new vertex is always appended with id n
struct ZeroExtension {
  std::vector<int> neighbours;     // one or two existing vertices
  std::array<Colour, 2> colours;   // colours[i] pairs with neighbours[min(i, size-1)]
};

// removes `removed`, adds vertex v with edges (removed.u, v, colour_u),
// (removed.v, v, colour_v) and (third, v, colour_third)
struct OneExtension {
  ColouredEdge removed;
  Colour colour_u = Colour::blue;
  Colour colour_v = Colour::blue;
  int third = 0;
  Colour colour_third = Colour::blue;
};

// splits v into v and the new vertex v2, both joined to x by colour edges and
// to each other; incident edges listed in to_new move from v to v2
struct VertexSplit {
  int v = 0;
  int x = 0;
  Colour colour = Colour::blue;
  std::vector<std::pair<int, Colour>> to_new;
};

// removes v, inserts a disjoint copy of h (ids appended after the survivors,
// which shift down past v), and reattaches each former v-edge to an h-vertex
struct GraphExtension {
  int v = 0;
  BiColouredMultigraph h;
  std::vector<std::tuple<int, Colour, int>> attach;  // (old neighbour, colour, h vertex)
};

// replaces the doubled pairs x-y and y-z by a red K4 on {x, y, z, new vertex}
struct K2K2Substitution {
  int x = 0;
  int y = 0;
  int z = 0;
};

struct ConstructionMove {
  std::variant<ZeroExtension, OneExtension, VertexSplit, GraphExtension, K2K2Substitution> op;
  std::optional<std::vector<int>> relabel;  // applied after the op during replay
};

struct ConstructionTrace {
  BiColouredMultigraph base;
  std::vector<ConstructionMove> steps;
};

inline BiColouredMultigraph zero_extension(const BiColouredMultigraph& g,
                                           const std::vector<int>& neighbours,
                                           std::array<Colour, 2> colours) {
  int n = g.vertex_count();
  if (neighbours.empty() || neighbours.size() > 2)
    throw std::invalid_argument("zero-extension attaches to one or two vertices");
  for (int u : neighbours)
    if (u < 0 || u >= n) throw std::invalid_argument("zero-extension neighbour out of range");
  if (neighbours.size() == 1 && colours[0] == colours[1])
    throw std::invalid_argument("a single neighbour needs one edge of each colour");
  if (neighbours.size() == 2 && neighbours[0] == neighbours[1])
    throw std::invalid_argument("repeated neighbour must use the single-neighbour form");
  BiColouredMultigraph out = g;
  int v = out.add_vertex();
  out.add_edge(neighbours.front(), v, colours[0]);
  out.add_edge(neighbours.back(), v, colours[1]);
  return out;
}

inline BiColouredMultigraph one_extension(const BiColouredMultigraph& g, ColouredEdge removed,
                                          int third, Colour colour_u, Colour colour_v,
                                          Colour colour_third,
                                          const std::optional<SparsityClass>& cls = std::nullopt) {
  removed = edge(removed.u, removed.v, removed.colour);
  if (removed.u == removed.v) throw std::invalid_argument("one-extension cannot remove a loop");
  if (!g.has_edge(removed.u, removed.v, removed.colour))
    throw std::invalid_argument("one-extension must remove an existing edge");
  if (third < 0 || third >= g.vertex_count())
    throw std::invalid_argument("one-extension third vertex out of range");
  if (third == removed.u && colour_third == colour_u)
    throw std::invalid_argument("parallel edges at the new vertex must differ in colour");
  if (third == removed.v && colour_third == colour_v)
    throw std::invalid_argument("parallel edges at the new vertex must differ in colour");
  if (cls) {
    using Kind = SparsityClass::Kind;
    switch (cls->kind) {
      case Kind::tight_2_2:
        if (colour_u != removed.colour || colour_v != removed.colour)
          throw std::invalid_argument("this class admits only colour-restricted one-extensions");
        if (third == removed.u || third == removed.v)
          throw std::invalid_argument("this class needs three distinct neighbours");
        break;
      case Kind::tight_2_2_blue_limited:
        if (removed.colour == Colour::red && colour_u == Colour::blue && colour_v == Colour::blue)
          throw std::invalid_argument("colour case red to blue/blue is excluded");
        if (removed.colour == Colour::blue && colour_u == Colour::red &&
            colour_v == Colour::red && g.has_edge(removed.u, removed.v, Colour::red))
          throw std::invalid_argument("colour case blue to red/red is excluded on a doubled pair");
        break;
      case Kind::tight_2_2_mono_limited:
        if (removed.colour == Colour::red && colour_u == Colour::blue && colour_v == Colour::blue)
          throw std::invalid_argument("colour case red to blue/blue is excluded");
        if (removed.colour == Colour::blue && colour_u == Colour::red && colour_v == Colour::red)
          throw std::invalid_argument("colour case blue to red/red is excluded");
        break;
      case Kind::tight_2_3:
        if (third == removed.u || third == removed.v)
          throw std::invalid_argument("this class needs three distinct neighbours");
        break;
      case Kind::separable:
        throw std::invalid_argument("no one-extension move set for this class");
    }
  }
  BiColouredMultigraph out = g;
  int v = out.add_vertex();
  out.remove_edge(removed.u, removed.v, removed.colour);
  out.add_edge(removed.u, v, colour_u);
  out.add_edge(removed.v, v, colour_v);
  out.add_edge(third, v, colour_third);
  return out;
}

inline BiColouredMultigraph vertex_split(const BiColouredMultigraph& g, int v, int x, Colour c,
                                         const std::vector<std::pair<int, Colour>>& to_new) {
  if (v == x) throw std::invalid_argument("vertex split needs distinct v and x");
  if (!g.has_edge(x, v, c)) throw std::invalid_argument("vertex split needs the edge (x,v) of the given colour");
  for (const auto& e : g.incident_edges(v))
    if (e.u == e.v) throw std::invalid_argument("vertex split does not support loops at v");
  std::vector<std::pair<int, Colour>> moved = to_new;
  std::sort(moved.begin(), moved.end());
  for (size_t i = 1; i < moved.size(); ++i)
    if (moved[i] == moved[i - 1]) throw std::invalid_argument("duplicate entry in to_new");
  for (const auto& [y, cy] : moved) {
    if (y == x && cy == c)
      throw std::invalid_argument("the split edge itself cannot be reassigned");
    if (!g.has_edge(y, v, cy))
      throw std::invalid_argument("to_new entry is not an edge at v");
  }
  BiColouredMultigraph out = g;
  int v2 = out.add_vertex();
  out.add_edge(v, v2, c);
  out.add_edge(x, v2, c);
  for (const auto& [y, cy] : moved) {
    out.remove_edge(y, v, cy);
    out.add_edge(y, v2, cy);
  }
  return out;
}

inline BiColouredMultigraph graph_extension(const BiColouredMultigraph& g, int v,
                                            const BiColouredMultigraph& h,
                                            const std::vector<std::tuple<int, Colour, int>>& attach) {
  int n = g.vertex_count();
  if (v < 0 || v >= n) throw std::invalid_argument("graph extension vertex out of range");
  if (deficiency(h) != 2) throw std::invalid_argument("inserted graph must have deficiency 2");
  auto incident = g.incident_edges(v);
  for (const auto& e : incident)
    if (e.u == e.v) throw std::invalid_argument("graph extension does not support loops at v");
  if (attach.size() != incident.size())
    throw std::invalid_argument("attachment must cover exactly the edges at v");
  std::vector<ColouredEdge> covered;
  for (const auto& [y, cy, hv] : attach) {
    if (hv < 0 || hv >= h.vertex_count())
      throw std::invalid_argument("attachment target outside the inserted graph");
    if (!g.has_edge(y, v, cy)) throw std::invalid_argument("attachment entry is not an edge at v");
    covered.push_back(edge(y, v, cy));
  }
  std::sort(covered.begin(), covered.end());
  if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
    throw std::invalid_argument("attachment lists an edge twice");
  auto shift = [v](int w) { return w > v ? w - 1 : w; };
  BiColouredMultigraph out = g.without_vertex(v);
  int offset = out.vertex_count();
  for (int i = 0; i < h.vertex_count(); ++i) out.add_vertex();
  for (const auto& e : h.edges()) out.add_edge(offset + e.u, offset + e.v, e.colour);
  for (const auto& [y, cy, hv] : attach) out.add_edge(shift(y), offset + hv, cy);
  return out;
}

inline BiColouredMultigraph k2k2_substitute(const BiColouredMultigraph& g, int x, int y, int z) {
  int n = g.vertex_count();
  if (x == y || y == z || x == z) throw std::invalid_argument("substitution needs three distinct vertices");
  if (x < 0 || y < 0 || z < 0 || x >= n || y >= n || z >= n)
    throw std::invalid_argument("substitution vertex out of range");
  for (Colour c : {Colour::blue, Colour::red})
    if (!g.has_edge(x, y, c) || !g.has_edge(y, z, c))
      throw std::invalid_argument("substitution pattern absent: both pairs must be doubled");
  if (g.has_edge(x, z, Colour::red))
    throw std::invalid_argument("substitution collides with an existing red edge");
  BiColouredMultigraph out = g;
  out.remove_edge(x, y, Colour::blue);
  out.remove_edge(y, z, Colour::blue);
  int v = out.add_vertex();
  out.add_edge(x, z, Colour::red);
  out.add_edge(x, v, Colour::red);
  out.add_edge(y, v, Colour::red);
  out.add_edge(z, v, Colour::red);
  return out;
}

inline BiColouredMultigraph apply_move(const BiColouredMultigraph& g, const ConstructionMove& m) {
  BiColouredMultigraph out = std::visit(
      [&](const auto& op) -> BiColouredMultigraph {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ZeroExtension>)
          return zero_extension(g, op.neighbours, op.colours);
        else if constexpr (std::is_same_v<T, OneExtension>)
          return one_extension(g, op.removed, op.third, op.colour_u, op.colour_v, op.colour_third);
        else if constexpr (std::is_same_v<T, VertexSplit>)
          return vertex_split(g, op.v, op.x, op.colour, op.to_new);
        else if constexpr (std::is_same_v<T, GraphExtension>)
          return graph_extension(g, op.v, op.h, op.attach);
        else
          return k2k2_substitute(g, op.x, op.y, op.z);
      },
      m.op);
  if (m.relabel) out = out.relabelled(*m.relabel);
  return out;
}

inline BiColouredMultigraph replay(const ConstructionTrace& trace) {
  BiColouredMultigraph g = trace.base;
  for (const auto& step : trace.steps) g = apply_move(g, step);
  return g;
}

// --- json encoding -----------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json edge_json(const ColouredEdge& e) {
  return {e.u, e.v, std::string(1, colour_code(e.colour))};
}

inline ColouredEdge edge_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("edge must be [u, v, colour]");
  return edge(j[0].get<int>(), j[1].get<int>(), colour_from_code(j[2].get<std::string>()));
}

inline std::string code(Colour c) { return std::string(1, colour_code(c)); }

}  // namespace detail

inline nlohmann::ordered_json move_to_json(const ConstructionMove& m) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ZeroExtension>) {
          j["kind"] = "0ext";
          j["neighbours"] = op.neighbours;
          j["colours"] = {detail::code(op.colours[0]), detail::code(op.colours[1])};
        } else if constexpr (std::is_same_v<T, OneExtension>) {
          j["kind"] = "1ext";
          j["removed"] = detail::edge_json(op.removed);
          j["colour_u"] = detail::code(op.colour_u);
          j["colour_v"] = detail::code(op.colour_v);
          j["third"] = op.third;
          j["colour_third"] = detail::code(op.colour_third);
        } else if constexpr (std::is_same_v<T, VertexSplit>) {
          j["kind"] = "split";
          j["v"] = op.v;
          j["x"] = op.x;
          j["colour"] = detail::code(op.colour);
          auto arr = nlohmann::ordered_json::array();
          for (const auto& [y, c] : op.to_new) arr.push_back({y, detail::code(c)});
          j["to_new"] = arr;
        } else if constexpr (std::is_same_v<T, GraphExtension>) {
          j["kind"] = "gext";
          j["v"] = op.v;
          j["h"] = graph_to_json(op.h);
          auto arr = nlohmann::ordered_json::array();
          for (const auto& [y, c, hv] : op.attach) arr.push_back({y, detail::code(c), hv});
          j["attach"] = arr;
        } else {
          j["kind"] = "k2k2";
          j["x"] = op.x;
          j["y"] = op.y;
          j["z"] = op.z;
        }
      },
      m.op);
  if (m.relabel) j["relabel"] = *m.relabel;
  return j;
}

inline ConstructionMove move_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("move must have a kind");
  ConstructionMove m;
  std::string kind = j["kind"].get<std::string>();
  if (kind == "0ext") {
    ZeroExtension op;
    op.neighbours = j.at("neighbours").get<std::vector<int>>();
    op.colours = {colour_from_code(j.at("colours")[0].get<std::string>()),
                  colour_from_code(j.at("colours")[1].get<std::string>())};
    m.op = op;
  } else if (kind == "1ext") {
    OneExtension op;
    op.removed = detail::edge_from_json(j.at("removed"));
    op.colour_u = colour_from_code(j.at("colour_u").get<std::string>());
    op.colour_v = colour_from_code(j.at("colour_v").get<std::string>());
    op.third = j.at("third").get<int>();
    op.colour_third = colour_from_code(j.at("colour_third").get<std::string>());
    m.op = op;
  } else if (kind == "split") {
    VertexSplit op;
    op.v = j.at("v").get<int>();
    op.x = j.at("x").get<int>();
    op.colour = colour_from_code(j.at("colour").get<std::string>());
    for (const auto& item : j.at("to_new"))
      op.to_new.emplace_back(item[0].get<int>(), colour_from_code(item[1].get<std::string>()));
    m.op = op;
  } else if (kind == "gext") {
    GraphExtension op;
    op.v = j.at("v").get<int>();
    op.h = graph_from_json(j.at("h"));
    for (const auto& item : j.at("attach"))
      op.attach.emplace_back(item[0].get<int>(), colour_from_code(item[1].get<std::string>()),
                             item[2].get<int>());
    m.op = op;
  } else if (kind == "k2k2") {
    K2K2Substitution op;
    op.x = j.at("x").get<int>();
    op.y = j.at("y").get<int>();
    op.z = j.at("z").get<int>();
    m.op = op;
  } else {
    throw std::invalid_argument("unknown move kind: " + kind);
  }
  if (j.contains("relabel")) m.relabel = j["relabel"].get<std::vector<int>>();
  return m;
}

inline nlohmann::ordered_json trace_to_json(const ConstructionTrace& t) {
  nlohmann::ordered_json j;
  j["base"] = graph_to_json(t.base);
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : t.steps) steps.push_back(move_to_json(s));
  j["steps"] = steps;
  return j;
}

inline ConstructionTrace trace_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("steps"))
    throw std::invalid_argument("trace must have base and steps");
  ConstructionTrace t;
  t.base = graph_from_json(j["base"]);
  for (const auto& s : j["steps"]) t.steps.push_back(move_from_json(s));
  return t;
}

// --- random construction ------------------------------------------------------

namespace detail {

inline BiColouredMultigraph doubled_k2() {
  BiColouredMultigraph g(2);
  g.add_edge(0, 1, Colour::blue);
  g.add_edge(0, 1, Colour::red);
  return g;
}

inline BiColouredMultigraph random_k4(Rng& rng, bool base_colouring) {
  BiColouredMultigraph g(4);
  Colour major = rng.colour();
  int off = base_colouring ? (rng.coin() ? rng.below(6) : -1) : -2;  // -1: all one colour
  int idx = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v, ++idx) {
      Colour c = major;
      if (off == -2)
        c = rng.colour();
      else if (idx == off)
        c = other(major);
      g.add_edge(u, v, c);
    }
  return g;
}

// (x, y, z) triples carrying the doubled-doubled pattern around middle y
inline std::vector<std::array<int, 3>> k2k2_sites(const BiColouredMultigraph& g) {
  std::vector<std::array<int, 3>> sites;
  int n = g.vertex_count();
  auto doubled = [&](int a, int b) {
    return g.has_edge(a, b, Colour::blue) && g.has_edge(a, b, Colour::red);
  };
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (x == y || !doubled(x, y)) continue;
      for (int z = x + 1; z < n; ++z) {
        if (z == y || !doubled(y, z)) continue;
        if (g.has_edge(x, z, Colour::red)) continue;
        sites.push_back({x, y, z});
      }
    }
  return sites;
}

}  // namespace detail

// grows a class member to n_target vertices; every output passes class_check
inline std::pair<BiColouredMultigraph, ConstructionTrace> random_construct(
    const SparsityClass& cls, int n_target, std::uint64_t seed) {
  using Kind = SparsityClass::Kind;
  if (cls.kind == Kind::separable)
    throw std::invalid_argument("no construction move set for this class");
  int min_n = cls.kind == Kind::tight_2_3 ? 2 : 1;
  if (n_target < min_n)
    throw std::invalid_argument("target vertex count below the smallest class member");

  Rng rng(seed);
  ConstructionTrace trace;
  if (cls.kind == Kind::tight_2_3) {
    BiColouredMultigraph k2(2);
    k2.add_edge(0, 1, rng.colour());
    trace.base = k2;
  } else if (cls.kind == Kind::tight_2_2 && n_target >= 4 && rng.coin()) {
    trace.base = detail::random_k4(rng, true);
  } else {
    trace.base = BiColouredMultigraph(1);
  }

  BiColouredMultigraph g = trace.base;
  while (g.vertex_count() < n_target) {
    int n = g.vertex_count();
    enum class MK { zero, one, split, gext, k2k2 };
    std::vector<MK> kinds{MK::zero};
    bool third_needs_distinct =
        cls.kind == Kind::tight_2_2 || cls.kind == Kind::tight_2_3;
    if (g.edge_count() > 0 && (!third_needs_distinct || n >= 3)) kinds.push_back(MK::one);
    std::vector<std::array<int, 3>> sites;
    if (cls.kind == Kind::tight_2_2) {
      if (g.edge_count() > 0) kinds.push_back(MK::split);
      kinds.push_back(MK::gext);
    }
    if (cls.kind == Kind::tight_2_2_blue_limited) {
      sites = detail::k2k2_sites(g);
      if (!sites.empty()) kinds.push_back(MK::k2k2);
    }

    std::optional<ConstructionMove> move;
    for (int attempt = 0; attempt < 64 && !move; ++attempt) {
      switch (kinds[rng.below(static_cast<int>(kinds.size()))]) {
        case MK::zero: {
          ZeroExtension op;
          if (n >= 2 && (cls.kind == Kind::tight_2_3 || rng.coin())) {
            int u = rng.below(n);
            int w = rng.below(n - 1);
            if (w >= u) ++w;
            op.neighbours = {u, w};
            op.colours = {rng.colour(), rng.colour()};
          } else {
            if (cls.kind == Kind::tight_2_3) break;  // parallel pairs are not (2,3)-sparse
            op.neighbours = {rng.below(n)};
            op.colours = {Colour::blue, Colour::red};
          }
          move = ConstructionMove{op, std::nullopt};
          break;
        }
        case MK::one: {
          const auto& e = g.edges()[rng.below(g.edge_count())];
          OneExtension op;
          op.removed = e;
          if (cls.kind == Kind::tight_2_2) {
            op.colour_u = op.colour_v = e.colour;
          } else if (cls.kind == Kind::tight_2_3) {
            op.colour_u = rng.colour();
            op.colour_v = rng.colour();
          } else {
            op.colour_u = rng.colour();
            op.colour_v = rng.colour();
            bool both_blue = op.colour_u == Colour::blue && op.colour_v == Colour::blue;
            bool both_red = op.colour_u == Colour::red && op.colour_v == Colour::red;
            if (e.colour == Colour::red && both_blue) break;
            if (e.colour == Colour::blue && both_red &&
                (cls.kind == Kind::tight_2_2_mono_limited ||
                 g.has_edge(e.u, e.v, Colour::red)))
              break;
          }
          if (third_needs_distinct) {
            op.third = rng.below(n - 2);
            if (op.third >= std::min(e.u, e.v)) ++op.third;
            if (op.third >= std::max(e.u, e.v)) ++op.third;
          } else {
            op.third = rng.below(n);
          }
          op.colour_third = rng.colour();
          if (op.third == e.u && op.colour_third == op.colour_u) op.colour_third = other(op.colour_u);
          if (op.third == e.v && op.colour_third == op.colour_v) op.colour_third = other(op.colour_v);
          move = ConstructionMove{op, std::nullopt};
          break;
        }
        case MK::split: {
          const auto& e = g.edges()[rng.below(g.edge_count())];
          VertexSplit op;
          bool v_first = rng.coin();
          op.v = v_first ? e.u : e.v;
          op.x = v_first ? e.v : e.u;
          op.colour = e.colour;
          for (const auto& inc : g.incident_edges(op.v)) {
            int y = inc.u == op.v ? inc.v : inc.u;
            if (y == op.x && inc.colour == op.colour) continue;  // the split edge stays
            if (rng.coin()) op.to_new.emplace_back(y, inc.colour);
          }
          move = ConstructionMove{op, std::nullopt};
          break;
        }
        case MK::gext: {
          GraphExtension op;
          op.v = rng.below(n);
          bool big = n + 3 <= n_target && rng.coin();
          op.h = big ? detail::random_k4(rng, false) : detail::doubled_k2();
          for (const auto& inc : g.incident_edges(op.v)) {
            int y = inc.u == op.v ? inc.v : inc.u;
            op.attach.emplace_back(y, inc.colour, rng.below(op.h.vertex_count()));
          }
          move = ConstructionMove{op, std::nullopt};
          break;
        }
        case MK::k2k2: {
          const auto& s = sites[rng.below(static_cast<int>(sites.size()))];
          move = ConstructionMove{K2K2Substitution{s[0], s[1], s[2]}, std::nullopt};
          break;
        }
      }
    }
    if (!move) throw std::runtime_error("construction sampling stalled");
    g = apply_move(g, *move);
    trace.steps.push_back(std::move(*move));
  }
  return {std::move(g), std::move(trace)};
}

// --- reduction ----------------------------------------------------------------

struct ReductionStep {
  bool at_base = false;
  ConstructionMove move;          // forward move on `reduced`, with restore relabelling
  BiColouredMultigraph reduced;
};

namespace detail {

inline bool is_k1(const BiColouredMultigraph& g) {
  return g.vertex_count() == 1 && g.edge_count() == 0;
}

// K4 whose colouring has at least five edges of one colour
inline bool is_k4_base(const BiColouredMultigraph& g) {
  if (g.vertex_count() != 4 || g.edge_count() != 6) return false;
  int reds = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      bool b = g.has_edge(u, v, Colour::blue);
      bool r = g.has_edge(u, v, Colour::red);
      if (b == r) return false;  // one edge per pair exactly
      if (r) ++reds;
    }
  return reds >= 5 || reds <= 1;
}

// restore relabelling for a reduction that deletes vertex v: the forward move
// appends the replacement last, so position j maps back to the original id
inline std::vector<int> restore_after_delete(int n, int v) {
  std::vector<int> rho(n);
  for (int j = 0; j < n - 1; ++j) rho[j] = j < v ? j : j + 1;
  rho[n - 1] = v;
  return rho;
}

inline bool identity_perm(const std::vector<int>& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

inline std::optional<std::vector<int>> restore_or_null(std::vector<int> rho) {
  if (identity_perm(rho)) return std::nullopt;
  return rho;
}

}  // namespace detail

// one inverse construction step, deterministic; throws if the graph is a class
// member yet no reduction exists (which would falsify the construction theorem)
inline ReductionStep find_reduction(const BiColouredMultigraph& g, const SparsityClass& cls) {
  using Kind = SparsityClass::Kind;
  if (cls.kind != Kind::tight_2_2 && cls.kind != Kind::tight_2_2_blue_limited)
    throw std::invalid_argument("reduction is defined for tight22 and blue-limited only");
  if (!class_check(g, cls).verdict)
    throw std::invalid_argument("reduction requires a class member");

  if (detail::is_k1(g)) return {true, {}, g};
  if (cls.kind == Kind::tight_2_2 && detail::is_k4_base(g)) return {true, {}, g};

  int n = g.vertex_count();
  auto shift = [](int w, int v) { return w > v ? w - 1 : w; };

  // 0-reduction at the lowest-id degree-2 vertex
  for (int v = 0; v < n; ++v) {
    auto inc = g.incident_edges(v);
    if (inc.size() != 2) continue;
    ZeroExtension op;
    int a = inc[0].u == v ? inc[0].v : inc[0].u;
    int b = inc[1].u == v ? inc[1].v : inc[1].u;
    if (a == b) {
      op.neighbours = {shift(a, v)};
    } else {
      op.neighbours = {shift(a, v), shift(b, v)};
    }
    op.colours = {inc[0].colour, inc[1].colour};
    ConstructionMove m{op, detail::restore_or_null(detail::restore_after_delete(n, v))};
    return {false, std::move(m), g.without_vertex(v)};
  }

  // 1-reduction at a degree-3 vertex, candidate edges in (pair, colour) order
  for (int v = 0; v < n; ++v) {
    auto inc = g.incident_edges(v);
    if (inc.size() != 3) continue;
    BiColouredMultigraph stripped = g.without_vertex(v);

    // endpoints (i, j) of inc picked as the replaced pair; the leftover is third
    std::array<std::array<int, 2>, 3> pick = {{{0, 1}, {0, 2}, {1, 2}}};
    struct Candidate {
      int x, y;           // reduced-graph ids, x <= y
      Colour cx, cy;      // colours of the v-edges at x and y
      int third;
      Colour cthird;
      Colour added;
    };
    std::vector<Candidate> cands;
    for (const auto& [i, j] : pick) {
      int a = inc[i].u == v ? inc[i].v : inc[i].u;
      int b = inc[j].u == v ? inc[j].v : inc[j].u;
      if (a == b) continue;  // replacement edges go to distinct endpoints
      int k = 3 - i - j;
      int t = inc[k].u == v ? inc[k].v : inc[k].u;
      if (cls.kind == Kind::tight_2_2 && (t == a || t == b)) continue;
      int x = shift(a, v), y = shift(b, v);
      Colour cx = inc[i].colour, cy = inc[j].colour;
      if (x > y) {
        std::swap(x, y);
        std::swap(cx, cy);
      }
      for (Colour added : {Colour::blue, Colour::red}) {
        if (stripped.has_edge(x, y, added)) continue;
        if (cls.kind == Kind::tight_2_2) {
          if (cx != added || cy != added) continue;
        } else {
          bool both_blue = cx == Colour::blue && cy == Colour::blue;
          bool both_red = cx == Colour::red && cy == Colour::red;
          if (added == Colour::red && both_blue) continue;
          if (added == Colour::blue && both_red && stripped.has_edge(x, y, Colour::red)) continue;
        }
        cands.push_back({x, y, cx, cy, shift(t, v), inc[k].colour, added});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& p, const Candidate& q) {
      return std::tie(p.x, p.y, p.added) < std::tie(q.x, q.y, q.added);
    });
    for (const auto& c : cands) {
      BiColouredMultigraph reduced = stripped;
      reduced.add_edge(c.x, c.y, c.added);
      if (!class_check(reduced, cls).verdict) continue;
      OneExtension op;
      op.removed = edge(c.x, c.y, c.added);
      op.colour_u = c.cx;
      op.colour_v = c.cy;
      op.third = c.third;
      op.colour_third = c.cthird;
      ConstructionMove m{op, detail::restore_or_null(detail::restore_after_delete(n, v))};
      return {false, std::move(m), std::move(reduced)};
    }
  }

  if (cls.kind == Kind::tight_2_2_blue_limited) {
    // red-K4 back-substitution: v of red degree 3 inside a red triangle
    for (int v = 0; v < n; ++v) {
      auto inc = g.incident_edges(v);
      if (inc.size() != 3) continue;
      std::vector<int> nb;
      bool all_red = true;
      for (const auto& e : inc) {
        all_red = all_red && e.colour == Colour::red;
        nb.push_back(e.u == v ? e.v : e.u);
      }
      std::sort(nb.begin(), nb.end());
      if (!all_red || std::adjacent_find(nb.begin(), nb.end()) != nb.end()) continue;
      if (!g.has_edge(nb[0], nb[1], Colour::red) || !g.has_edge(nb[0], nb[2], Colour::red) ||
          !g.has_edge(nb[1], nb[2], Colour::red))
        continue;
      for (int mid : nb) {
        std::vector<int> tips;
        for (int w : nb)
          if (w != mid) tips.push_back(w);
        if (g.has_edge(tips[0], mid, Colour::blue) || g.has_edge(mid, tips[1], Colour::blue))
          continue;
        BiColouredMultigraph reduced = g.without_vertex(v);
        int s = shift(tips[0], v), m = shift(mid, v), t = shift(tips[1], v);
        reduced.remove_edge(s, t, Colour::red);
        reduced.add_edge(s, m, Colour::blue);
        reduced.add_edge(m, t, Colour::blue);
        if (!class_check(reduced, cls).verdict) continue;
        ConstructionMove mv{K2K2Substitution{s, m, t},
                            detail::restore_or_null(detail::restore_after_delete(n, v))};
        return {false, std::move(mv), std::move(reduced)};
      }
    }
  }

  if (cls.kind == Kind::tight_2_2) {
    // monochrome-triangle contraction: merge b into a with apex x
    for (const auto& e : g.edges()) {
      if (e.u == e.v) continue;
      int a = e.u, b = e.v;
      for (int x = 0; x < n; ++x) {
        if (x == a || x == b) continue;
        if (!g.has_edge(a, x, e.colour) || !g.has_edge(b, x, e.colour)) continue;
        bool ok = true;
        std::vector<std::pair<int, Colour>> moved;
        for (const auto& be : g.incident_edges(b)) {
          if (be == e) continue;  // the contracted edge itself
          int w = be.u == b ? be.v : be.u;
          if (w == a) {
            ok = false;  // a parallel (a,b) edge would contract to a loop
            break;
          }
          if (w == x && be.colour == e.colour) continue;  // apex edge disappears
          if (g.has_edge(a, w, be.colour)) {
            ok = false;
            break;
          }
          moved.emplace_back(w, be.colour);
        }
        if (!ok) continue;
        BiColouredMultigraph reduced(n - 1);
        for (const auto& ge : g.edges()) {
          if (ge.u == b || ge.v == b) continue;
          reduced.add_edge(shift(ge.u, b), shift(ge.v, b), ge.colour);
        }
        for (const auto& [w, c] : moved) reduced.add_edge(shift(a, b), shift(w, b), c);
        if (!class_check(reduced, cls).verdict) continue;
        VertexSplit op;
        op.v = shift(a, b);
        op.x = shift(x, b);
        op.colour = e.colour;
        for (const auto& [w, c] : moved) op.to_new.emplace_back(shift(w, b), c);
        std::sort(op.to_new.begin(), op.to_new.end());
        ConstructionMove m{op, detail::restore_or_null(detail::restore_after_delete(n, b))};
        return {false, std::move(m), std::move(reduced)};
      }
    }

    // contraction of a proper tight induced subgraph to a single vertex
    if (n > 18) throw std::runtime_error("tight-subgraph search beyond supported size");
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      int pc = __builtin_popcount(s);
      if (pc >= 2 && pc <= n - 1) subsets.push_back(s);
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](std::uint32_t p, std::uint32_t q) {
      return std::make_pair(__builtin_popcount(p), p) < std::make_pair(__builtin_popcount(q), q);
    });
    for (std::uint32_t s : subsets) {
      int inside = 0;
      for (const auto& e : g.edges())
        if ((s >> e.u & 1) && (s >> e.v & 1)) ++inside;
      if (2 * __builtin_popcount(s) - inside != 2) continue;

      std::vector<int> members, h_index(n, -1), out_rank(n, -1);
      int rank = 0;
      for (int w = 0; w < n; ++w) {
        if (s >> w & 1) {
          h_index[w] = static_cast<int>(members.size());
          members.push_back(w);
        } else {
          out_rank[w] = rank++;
        }
      }
      int cid = rank;  // contracted vertex comes last

      bool ok = true;
      BiColouredMultigraph reduced(rank + 1);
      BiColouredMultigraph h(static_cast<int>(members.size()));
      std::vector<std::tuple<int, Colour, int>> attach;
      for (const auto& e : g.edges()) {
        bool iu = s >> e.u & 1, iv = s >> e.v & 1;
        try {
          if (iu && iv) {
            h.add_edge(h_index[e.u], h_index[e.v], e.colour);
          } else if (!iu && !iv) {
            reduced.add_edge(out_rank[e.u], out_rank[e.v], e.colour);
          } else {
            int w = iu ? e.v : e.u;
            int in = iu ? e.u : e.v;
            reduced.add_edge(out_rank[w], cid, e.colour);  // throws on a doubled colour
            attach.emplace_back(out_rank[w], e.colour, h_index[in]);
          }
        } catch (const std::invalid_argument&) {
          ok = false;
          break;
        }
      }
      if (!ok || !class_check(reduced, cls).verdict) continue;

      GraphExtension op;
      op.v = cid;
      op.h = std::move(h);
      op.attach = std::move(attach);
      std::sort(op.attach.begin(), op.attach.end());
      std::vector<int> rho(n);
      for (int w = 0; w < n; ++w)
        rho[out_rank[w] >= 0 ? out_rank[w] : cid + h_index[w]] = w;
      ConstructionMove m{std::move(op), detail::restore_or_null(std::move(rho))};
      return {false, std::move(m), std::move(reduced)};
    }
  }

  throw std::runtime_error("class member admits no reduction; this contradicts the construction theorem");
}

// peels g down to a base graph; replaying the trace rebuilds g exactly
inline ConstructionTrace reduce_fully(const BiColouredMultigraph& g, const SparsityClass& cls) {
  BiColouredMultigraph current = g;
  std::vector<ConstructionMove> reversed;
  int guard = g.vertex_count() + g.edge_count() + 1;
  for (int step = 0; step < guard; ++step) {
    ReductionStep r = find_reduction(current, cls);
    if (r.at_base) {
      ConstructionTrace trace;
      trace.base = std::move(current);
      trace.steps.assign(reversed.rbegin(), reversed.rend());
      return trace;
    }
    reversed.push_back(std::move(r.move));
    current = std::move(r.reduced);
  }
  throw std::runtime_error("reduction did not terminate within the step bound");
}

}  // namespace rigidity

#endif
