#ifndef RIGIDITY_SPARSITY_HPP
#define RIGIDITY_SPARSITY_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigidity/coloured_graph.hpp"

namespace rigidity {

struct SparsityReport {
  bool verdict = true;
  std::optional<Subgraph> witness;  // violating subgraph when verdict is false
};

struct SparsityClass {
  enum class Kind {
    tight_2_3,
    tight_2_2,
    tight_2_2_blue_limited,
    tight_2_2_mono_limited,
    separable,
  };

  Kind kind = Kind::tight_2_2;
  std::vector<std::pair<Colour, int>> blocks;  // separable only: (colour, dim), dim 1 or 2

  static SparsityClass tight23() { return {Kind::tight_2_3, {}}; }
  static SparsityClass tight22() { return {Kind::tight_2_2, {}}; }
  static SparsityClass blue_limited() { return {Kind::tight_2_2_blue_limited, {}}; }
  static SparsityClass mono_limited() { return {Kind::tight_2_2_mono_limited, {}}; }
  static SparsityClass separable(std::vector<std::pair<Colour, int>> blocks) {
    if (blocks.size() != 2 || blocks[0].first == blocks[1].first)
      throw std::invalid_argument("separable class needs one block per colour");
    for (const auto& [c, d] : blocks)
      if (d != 1 && d != 2) throw std::invalid_argument("block dimensions must be 1 or 2");
    return {Kind::separable, std::move(blocks)};
  }

  friend bool operator==(const SparsityClass&, const SparsityClass&) = default;

  std::string name() const {
    switch (kind) {
      case Kind::tight_2_3: return "tight23";
      case Kind::tight_2_2: return "tight22";
      case Kind::tight_2_2_blue_limited: return "blue-limited";
      case Kind::tight_2_2_mono_limited: return "mono-limited";
      case Kind::separable: {
        std::string s = "separable(";
        for (size_t i = 0; i < blocks.size(); ++i) {
          if (i) s += ",";
          s += colour_code(blocks[i].first);
          s += std::to_string(blocks[i].second);
        }
        return s + ")";
      }
    }
    return "?";
  }
};

namespace detail {

// the (2,l) pebble game; each vertex holds peb + outdeg == 2 throughout
class PebbleGame {
 public:
  PebbleGame(int n, int l) : l_(l), peb_(n, 2), out_(n) {}

  // tries to insert e; on failure records the reachable set certifying the violation
  bool insert(const ColouredEdge& e, std::vector<int>* fail_reach) {
    int u = e.u, v = e.v;
    if (u == v) {
      while (peb_[u] < l_ + 1) {
        if (!find_pebble(u, u, u)) {
          collect_reach({u}, fail_reach);
          return false;
        }
      }
      --peb_[u];
      add_arc(u, u);
    } else {
      while (peb_[u] + peb_[v] < l_ + 1) {
        if (!find_pebble(u, u, v) && !find_pebble(v, u, v)) {
          collect_reach({u, v}, fail_reach);
          return false;
        }
      }
      int tail = peb_[u] > 0 ? u : v;
      --peb_[tail];
      add_arc(tail, tail == u ? v : u);
    }
    return true;
  }

 private:
  void add_arc(int a, int b) {
    auto& o = out_[a];
    o.insert(std::lower_bound(o.begin(), o.end(), b), b);
  }

  void remove_arc(int a, int b) {
    auto& o = out_[a];
    o.erase(std::lower_bound(o.begin(), o.end(), b));
  }

  void reverse_arc(int a, int b) {
    remove_arc(a, b);
    add_arc(b, a);
  }

  // depth-first, lowest vertex id first; moves one free pebble to root on success
  bool find_pebble(int root, int ex0, int ex1) {
    std::vector<bool> visited(peb_.size(), false);
    visited[root] = true;
    if (dfs(root, ex0, ex1, visited)) {
      ++peb_[root];
      return true;
    }
    return false;
  }

  bool dfs(int a, int ex0, int ex1, std::vector<bool>& visited) {
    for (size_t idx = 0; idx < out_[a].size();) {
      int b = out_[a][idx];
      if (visited[b]) {
        ++idx;
        continue;
      }
      visited[b] = true;
      if (b != ex0 && b != ex1 && peb_[b] > 0) {
        --peb_[b];
        reverse_arc(a, b);
        return true;
      }
      if (dfs(b, ex0, ex1, visited)) {
        reverse_arc(a, b);
        return true;
      }
      ++idx;
    }
    return false;
  }

  void collect_reach(std::initializer_list<int> roots, std::vector<int>* reach) const {
    if (!reach) return;
    std::vector<bool> seen(peb_.size(), false);
    std::vector<int> stack;
    for (int r : roots)
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b : out_[a])
        if (!seen[b]) {
          seen[b] = true;
          stack.push_back(b);
        }
    }
    reach->clear();
    for (size_t i = 0; i < seen.size(); ++i)
      if (seen[i]) reach->push_back(static_cast<int>(i));
  }

  int l_;
  std::vector<int> peb_;
  std::vector<std::vector<int>> out_;  // sorted out-neighbour lists
};

inline void check_l(int l) {
  if (l < 1 || l > 3) throw std::invalid_argument("l must be 1, 2, or 3");
}

inline Subgraph full_subgraph(const BiColouredMultigraph& g) {
  Subgraph h;
  h.vertices.resize(g.vertex_count());
  std::iota(h.vertices.begin(), h.vertices.end(), 0);
  h.edges = g.edges();
  return h;
}

// graph on the same vertex set carrying only the colour-c edges
inline BiColouredMultigraph colour_restriction(const BiColouredMultigraph& g, Colour c) {
  BiColouredMultigraph m(g.vertex_count());
  for (const auto& e : g.edges())
    if (e.colour == c) m.add_edge(e.u, e.v, e.colour);
  return m;
}

}  // namespace detail

inline SparsityReport is_sparse(const BiColouredMultigraph& g, int l) {
  detail::check_l(l);
  if (l >= 2 && g.has_loops())
    throw std::invalid_argument("loops are only admissible for l = 1");
  detail::PebbleGame game(g.vertex_count(), l);
  std::vector<ColouredEdge> accepted;
  std::vector<int> reach;
  for (const auto& e : g.edges()) {
    if (game.insert(e, &reach)) {
      accepted.push_back(e);
      continue;
    }
    Subgraph w;
    w.vertices = reach;
    std::vector<bool> in(g.vertex_count(), false);
    for (int x : reach) in[x] = true;
    for (const auto& a : accepted)
      if (in[a.u] && in[a.v]) w.edges.push_back(a);
    w.edges.insert(std::lower_bound(w.edges.begin(), w.edges.end(), e), e);
    return {false, std::move(w)};
  }
  return {true, std::nullopt};
}

inline bool is_tight(const BiColouredMultigraph& g, int l) {
  detail::check_l(l);
  if (g.edge_count() != 2 * g.vertex_count() - l) return false;
  return is_sparse(g, l).verdict;
}

// exhaustive vertex-subset check, independent of the pebble game
inline bool brute_force_sparse(const BiColouredMultigraph& g, int l) {
  detail::check_l(l);
  int n = g.vertex_count();
  if (n > 12) throw std::invalid_argument("brute force oracle is limited to 12 vertices");
  const auto& edges = g.edges();
  std::vector<std::uint32_t> masks(edges.size());
  for (size_t i = 0; i < edges.size(); ++i)
    masks[i] = (1u << edges[i].u) | (1u << edges[i].v);
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    int popcount = __builtin_popcount(s);
    int count = 0;
    for (std::uint32_t m : masks)
      if ((m & s) == m) ++count;
    if (count >= 1 && count > 2 * popcount - l) return false;
  }
  return true;
}

inline bool is_blue_limited(const BiColouredMultigraph& g) {
  if (g.has_loops()) throw std::invalid_argument("blue limitation requires a loopless graph");
  return is_sparse(detail::colour_restriction(g, Colour::blue), 3).verdict;
}

inline bool is_23_circuit(const BiColouredMultigraph& g) {
  if (g.has_loops()) return false;
  int n = g.vertex_count();
  if (g.edge_count() != 2 * n - 2 || g.edge_count() == 0) return false;
  for (int v = 0; v < n; ++v)
    if (g.degree(v) == 0) return false;
  for (const auto& e : g.edges()) {
    BiColouredMultigraph h = g;
    h.remove_edge(e.u, e.v, e.colour);
    if (!is_sparse(h, 3).verdict) return false;
  }
  return true;
}

namespace detail {

inline SparsityReport tight_report(const BiColouredMultigraph& g, int l) {
  auto rep = is_sparse(g, l);
  if (!rep.verdict) return rep;
  if (g.edge_count() != 2 * g.vertex_count() - l) return {false, full_subgraph(g)};
  return {true, std::nullopt};
}

// dim-1 block: the colour class must form a spanning tree
inline SparsityReport spanning_tree_report(const BiColouredMultigraph& g, Colour c) {
  auto mono = colour_restriction(g, c);
  int n = mono.vertex_count();
  bool ok = mono.edge_count() == n - 1;
  if (ok) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = n;
    for (const auto& e : mono.edges()) {
      int a = find(e.u), b = find(e.v);
      if (a == b) {
        ok = false;
        break;
      }
      parent[a] = b;
      --components;
    }
    ok = ok && components == 1;
  }
  if (ok) return {true, std::nullopt};
  return {false, full_subgraph(mono)};
}

inline SparsityReport mono_23_report(const BiColouredMultigraph& g, Colour c) {
  auto mono = colour_restriction(g, c);
  auto rep = is_sparse(mono, 3);
  if (!rep.verdict) return rep;
  return {true, std::nullopt};
}

}  // namespace detail

inline SparsityReport class_check(const BiColouredMultigraph& g, const SparsityClass& cls) {
  if (g.has_loops()) throw std::invalid_argument("class membership requires a loopless graph");
  using Kind = SparsityClass::Kind;
  switch (cls.kind) {
    case Kind::tight_2_3:
      return detail::tight_report(g, 3);
    case Kind::tight_2_2:
      return detail::tight_report(g, 2);
    case Kind::tight_2_2_blue_limited: {
      auto rep = detail::tight_report(g, 2);
      if (!rep.verdict) return rep;
      return detail::mono_23_report(g, Colour::blue);
    }
    case Kind::tight_2_2_mono_limited: {
      auto rep = detail::tight_report(g, 2);
      if (!rep.verdict) return rep;
      rep = detail::mono_23_report(g, Colour::blue);
      if (!rep.verdict) return rep;
      return detail::mono_23_report(g, Colour::red);
    }
    case Kind::separable: {
      for (const auto& [colour, dim] : cls.blocks) {
        auto rep = dim == 1 ? detail::spanning_tree_report(g, colour)
                            : [&] {
                                auto mono = detail::colour_restriction(g, colour);
                                return detail::tight_report(mono, 3);
                              }();
        if (!rep.verdict) return rep;
      }
      return {true, std::nullopt};
    }
  }
  throw std::logic_error("unknown sparsity class");
}

}  // namespace rigidity

#endif
