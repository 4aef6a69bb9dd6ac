#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>

#include "rigidity/moves.hpp"

using namespace rigidity;
using Catch::Matchers::ContainsSubstring;

namespace {

BiColouredMultigraph bi_k2() {
  BiColouredMultigraph g(2);
  g.add_edge(0, 1, Colour::blue);
  g.add_edge(0, 1, Colour::red);
  return g;
}

// doubled path on three vertices, both pairs carrying both colours
BiColouredMultigraph doubled_p3() {
  BiColouredMultigraph g(3);
  for (Colour c : {Colour::blue, Colour::red}) {
    g.add_edge(0, 1, c);
    g.add_edge(1, 2, c);
  }
  return g;
}

BiColouredMultigraph mono_k4(Colour c) {
  BiColouredMultigraph g(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) g.add_edge(u, v, c);
  return g;
}

// K4 colouring from a 6-bit mask over pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
BiColouredMultigraph coloured_k4(unsigned bits) {
  BiColouredMultigraph g(4);
  int idx = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v, ++idx)
      g.add_edge(u, v, (bits >> idx & 1) ? Colour::red : Colour::blue);
  return g;
}

// two all-blue K4 copies glued at vertex 0; only a tight-subgraph contraction
// can reduce it
BiColouredMultigraph shared_vertex_k4s() {
  BiColouredMultigraph g(7);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) g.add_edge(u, v, Colour::blue);
  std::array<int, 4> wing = {0, 4, 5, 6};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.add_edge(wing[i], wing[j], Colour::blue);
  return g;
}

std::vector<int> random_perm(int n, Rng& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

}  // namespace

TEST_CASE("zero-extension attaches a new vertex", "[moves]") {
  BiColouredMultigraph k1(1);
  // [DERIVED] one neighbour: the two edges form a doubled pair
  auto g = zero_extension(k1, {0}, {Colour::blue, Colour::red});
  CHECK(g == bi_k2());
  // [DERIVED] two neighbours on the doubled pair
  auto h = zero_extension(bi_k2(), {0, 1}, {Colour::blue, Colour::blue});
  CHECK(serialize_graph(h) ==
        R"({"n":3,"edges":[[0,1,"b"],[0,1,"r"],[0,2,"b"],[1,2,"b"]]})");

  CHECK_THROWS_AS(zero_extension(k1, {}, {Colour::blue, Colour::red}), std::invalid_argument);
  CHECK_THROWS_AS(zero_extension(k1, {0, 0, 0}, {Colour::blue, Colour::red}),
                  std::invalid_argument);
  CHECK_THROWS_AS(zero_extension(k1, {1}, {Colour::blue, Colour::red}), std::invalid_argument);
  CHECK_THROWS_AS(zero_extension(k1, {0}, {Colour::red, Colour::red}), std::invalid_argument);
  CHECK_THROWS_AS(zero_extension(bi_k2(), {1, 1}, {Colour::blue, Colour::red}),
                  std::invalid_argument);
}

TEST_CASE("one-extension subdivides an edge", "[moves]") {
  // [DERIVED] remove the blue edge of the doubled pair, third neighbour is 0 again
  auto g = one_extension(bi_k2(), edge(0, 1, Colour::blue), 0, Colour::blue, Colour::blue,
                         Colour::red);
  CHECK(serialize_graph(g) ==
        R"({"n":3,"edges":[[0,1,"r"],[0,2,"b"],[0,2,"r"],[1,2,"b"]]})");
  CHECK(deficiency(g) == 2);

  CHECK_THROWS_WITH(one_extension(bi_k2(), edge(0, 1, Colour::blue), 0, Colour::blue,
                                  Colour::blue, Colour::blue),
                    ContainsSubstring("differ in colour"));
  BiColouredMultigraph single(2);
  single.add_edge(0, 1, Colour::red);
  CHECK_THROWS_WITH(one_extension(single, edge(0, 1, Colour::blue), 0, Colour::blue, Colour::blue,
                                  Colour::red),
                    ContainsSubstring("existing edge"));
  CHECK_THROWS_AS(one_extension(bi_k2(), edge(0, 1, Colour::blue), 7, Colour::blue, Colour::blue,
                                Colour::red),
                  std::invalid_argument);
  BiColouredMultigraph loopy(1);
  loopy.add_edge(0, 0, Colour::blue);
  CHECK_THROWS_WITH(one_extension(loopy, edge(0, 0, Colour::blue), 0, Colour::blue, Colour::blue,
                                  Colour::red),
                    ContainsSubstring("loop"));
}

TEST_CASE("one-extension class policies", "[moves]") {
  auto tight22 = SparsityClass::tight22();
  auto blue_lim = SparsityClass::blue_limited();
  auto mono_lim = SparsityClass::mono_limited();
  auto p3 = doubled_p3();

  // colour-restricted: both replacement edges must keep the removed colour
  CHECK_THROWS_WITH(one_extension(p3, edge(0, 1, Colour::blue), 2, Colour::blue, Colour::red,
                                  Colour::blue, tight22),
                    ContainsSubstring("colour-restricted"));
  // and the third neighbour must be distinct
  CHECK_THROWS_WITH(one_extension(p3, edge(0, 1, Colour::blue), 0, Colour::blue, Colour::blue,
                                  Colour::red, tight22),
                    ContainsSubstring("distinct"));
  CHECK_NOTHROW(one_extension(p3, edge(0, 1, Colour::blue), 2, Colour::blue, Colour::blue,
                              Colour::red, tight22));

  // mixed class: red may never become blue/blue
  CHECK_THROWS_WITH(one_extension(p3, edge(0, 1, Colour::red), 2, Colour::blue, Colour::blue,
                                  Colour::blue, blue_lim),
                    ContainsSubstring("red to blue/blue"));
  // blue to red/red is barred exactly when the red parallel is present
  CHECK_THROWS_WITH(one_extension(p3, edge(0, 1, Colour::blue), 2, Colour::red, Colour::red,
                                  Colour::blue, blue_lim),
                    ContainsSubstring("doubled pair"));
  BiColouredMultigraph lone(2);
  lone.add_edge(0, 1, Colour::blue);
  CHECK_NOTHROW(one_extension(lone, edge(0, 1, Colour::blue), 0, Colour::red, Colour::red,
                              Colour::blue, blue_lim));

  // monochrome-limited: both colour flips are barred outright
  CHECK_THROWS_AS(one_extension(lone, edge(0, 1, Colour::blue), 0, Colour::red, Colour::red,
                                Colour::blue, mono_lim),
                  std::invalid_argument);
  CHECK_THROWS_AS(one_extension(p3, edge(0, 1, Colour::red), 2, Colour::blue, Colour::blue,
                                Colour::blue, mono_lim),
                  std::invalid_argument);
  CHECK_NOTHROW(one_extension(p3, edge(0, 1, Colour::red), 2, Colour::blue, Colour::red,
                              Colour::blue, mono_lim));

  CHECK_THROWS_AS(one_extension(p3, edge(0, 1, Colour::blue), 2, Colour::blue, Colour::blue,
                                Colour::red,
                                SparsityClass::separable({{Colour::blue, 1}, {Colour::red, 1}})),
                  std::invalid_argument);
}

TEST_CASE("vertex split rewires a corner", "[moves]") {
  // [DERIVED] split the middle of the doubled path along the blue edge to 0
  auto g = vertex_split(doubled_p3(), 1, 0, Colour::blue, {{2, Colour::red}});
  CHECK(serialize_graph(g) ==
        R"({"n":4,"edges":[[0,1,"b"],[0,1,"r"],[0,3,"b"],[1,2,"b"],[1,3,"b"],[2,3,"r"]]})");
  CHECK(deficiency(g) == 2);

  CHECK_THROWS_AS(vertex_split(doubled_p3(), 1, 1, Colour::blue, {}), std::invalid_argument);
  CHECK_THROWS_WITH(vertex_split(doubled_p3(), 0, 2, Colour::blue, {}),
                    ContainsSubstring("needs the edge"));
  CHECK_THROWS_WITH(vertex_split(doubled_p3(), 1, 0, Colour::blue,
                                 {{2, Colour::red}, {2, Colour::red}}),
                    ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(vertex_split(doubled_p3(), 1, 0, Colour::blue, {{0, Colour::blue}}),
                    ContainsSubstring("split edge itself"));
  CHECK_THROWS_WITH(vertex_split(doubled_p3(), 1, 0, Colour::blue, {{2, Colour::blue}, {9, Colour::red}}),
                    ContainsSubstring("not an edge at v"));
  BiColouredMultigraph loopy(2);
  loopy.add_edge(0, 1, Colour::blue);
  loopy.add_edge(0, 0, Colour::red);
  CHECK_THROWS_WITH(vertex_split(loopy, 0, 1, Colour::blue, {}), ContainsSubstring("loops"));
}

TEST_CASE("graph extension swaps a vertex for a tight block", "[moves]") {
  // [DERIVED] replacing one end of the doubled pair by another doubled pair
  auto g = graph_extension(bi_k2(), 1, bi_k2(),
                           {{0, Colour::blue, 0}, {0, Colour::red, 0}});
  CHECK(g == doubled_p3());
  CHECK(serialize_graph(g) ==
        R"({"n":3,"edges":[[0,1,"b"],[0,1,"r"],[1,2,"b"],[1,2,"r"]]})");

  BiColouredMultigraph sparse_h(2);
  sparse_h.add_edge(0, 1, Colour::blue);
  CHECK_THROWS_WITH(graph_extension(bi_k2(), 1, sparse_h, {{0, Colour::blue, 0}, {0, Colour::red, 0}}),
                    ContainsSubstring("deficiency 2"));
  CHECK_THROWS_WITH(graph_extension(bi_k2(), 1, bi_k2(), {{0, Colour::blue, 0}}),
                    ContainsSubstring("cover exactly"));
  CHECK_THROWS_WITH(graph_extension(bi_k2(), 1, bi_k2(),
                                    {{0, Colour::blue, 5}, {0, Colour::red, 0}}),
                    ContainsSubstring("outside the inserted graph"));
  CHECK_THROWS_WITH(graph_extension(bi_k2(), 1, bi_k2(),
                                    {{0, Colour::blue, 0}, {0, Colour::blue, 1}}),
                    ContainsSubstring("lists an edge twice"));
  CHECK_THROWS_WITH(graph_extension(bi_k2(), 1, bi_k2(),
                                    {{0, Colour::blue, 0}, {1, Colour::red, 0}}),
                    ContainsSubstring("not an edge at v"));
  CHECK_THROWS_AS(graph_extension(bi_k2(), 9, bi_k2(), {}), std::invalid_argument);
}

TEST_CASE("doubled-pair substitution builds a red K4", "[moves]") {
  // [DERIVED] both doubled pairs of the path collapse into the red clique
  auto g = k2k2_substitute(doubled_p3(), 0, 1, 2);
  CHECK(serialize_graph(g) ==
        R"({"n":4,"edges":[[0,1,"r"],[0,2,"r"],[0,3,"r"],[1,2,"r"],[1,3,"r"],[2,3,"r"]]})");

  CHECK_THROWS_WITH(k2k2_substitute(bi_k2(), 0, 1, 1), ContainsSubstring("distinct"));
  auto p3 = doubled_p3();
  CHECK_THROWS_WITH(k2k2_substitute(p3, 1, 0, 2), ContainsSubstring("pattern absent"));
  auto with_red = doubled_p3();
  with_red.add_edge(0, 2, Colour::red);
  CHECK_THROWS_WITH(k2k2_substitute(with_red, 0, 1, 2), ContainsSubstring("existing red edge"));
}

TEST_CASE("moves serialize to stable json", "[moves]") {
  ConstructionMove z{ZeroExtension{{0, 1}, {Colour::blue, Colour::red}}, std::nullopt};
  CHECK(move_to_json(z).dump() ==
        R"({"kind":"0ext","neighbours":[0,1],"colours":["b","r"]})");
  ConstructionMove o{OneExtension{edge(0, 2, Colour::red), Colour::red, Colour::blue, 1,
                                  Colour::blue},
                     std::nullopt};
  CHECK(move_to_json(o).dump() ==
        R"({"kind":"1ext","removed":[0,2,"r"],"colour_u":"r","colour_v":"b","third":1,"colour_third":"b"})");
  ConstructionMove s{VertexSplit{0, 2, Colour::blue, {{1, Colour::red}}}, std::nullopt};
  CHECK(move_to_json(s).dump() ==
        R"({"kind":"split","v":0,"x":2,"colour":"b","to_new":[[1,"r"]]})");
  ConstructionMove ge{GraphExtension{1, bi_k2(), {{0, Colour::blue, 0}, {2, Colour::red, 1}}},
                      std::nullopt};
  CHECK(move_to_json(ge).dump() ==
        R"({"kind":"gext","v":1,"h":{"n":2,"edges":[[0,1,"b"],[0,1,"r"]]},"attach":[[0,"b",0],[2,"r",1]]})");
  ConstructionMove k{K2K2Substitution{0, 1, 2}, std::vector<int>{2, 0, 1, 3}};
  CHECK(move_to_json(k).dump() == R"({"kind":"k2k2","x":0,"y":1,"z":2,"relabel":[2,0,1,3]})");

  for (const auto* text :
       {R"({"kind":"0ext","neighbours":[0,1],"colours":["b","r"]})",
        R"({"kind":"1ext","removed":[0,2,"r"],"colour_u":"r","colour_v":"b","third":1,"colour_third":"b"})",
        R"({"kind":"split","v":0,"x":2,"colour":"b","to_new":[[1,"r"]]})",
        R"({"kind":"gext","v":1,"h":{"n":2,"edges":[[0,1,"b"],[0,1,"r"]]},"attach":[[0,"b",0],[2,"r",1]]})",
        R"({"kind":"k2k2","x":0,"y":1,"z":2,"relabel":[2,0,1,3]})"}) {
    auto m = move_from_json(nlohmann::json::parse(text));
    CHECK(move_to_json(m).dump() == text);
  }
  CHECK_THROWS_WITH(move_from_json(nlohmann::json::parse(R"({"kind":"warp","w":1})")),
                    ContainsSubstring("unknown move kind"));
  CHECK_THROWS_AS(move_from_json(nlohmann::json::parse("[]")), std::invalid_argument);
}

TEST_CASE("traces replay and round-trip", "[moves]") {
  ConstructionTrace t;
  t.base = BiColouredMultigraph(1);
  t.steps.push_back({ZeroExtension{{0}, {Colour::blue, Colour::red}}, std::nullopt});
  t.steps.push_back({ZeroExtension{{0}, {Colour::blue, Colour::red}},
                     std::vector<int>{2, 0, 1}});
  auto g = replay(t);
  // [DERIVED] the relabelling sends the doubled pairs onto (0,2) and (1,2)
  CHECK(serialize_graph(g) ==
        R"({"n":3,"edges":[[0,2,"b"],[0,2,"r"],[1,2,"b"],[1,2,"r"]]})");

  auto j = trace_to_json(t);
  CHECK(j.dump() ==
        R"({"base":{"n":1,"edges":[]},"steps":[)"
        R"({"kind":"0ext","neighbours":[0],"colours":["b","r"]},)"
        R"({"kind":"0ext","neighbours":[0],"colours":["b","r"],"relabel":[2,0,1]}]})");
  auto back = trace_from_json(nlohmann::json::parse(j.dump()));
  CHECK(replay(back) == g);
  CHECK_THROWS_AS(trace_from_json(nlohmann::json::parse(R"({"base":{"n":1,"edges":[]}})")),
                  std::invalid_argument);
}

TEST_CASE("random construction stays inside its class", "[moves][construct]") {
  struct Row {
    SparsityClass cls;
    int l;
  };
  const Row rows[] = {{SparsityClass::tight22(), 2},
                      {SparsityClass::blue_limited(), 2},
                      {SparsityClass::mono_limited(), 2},
                      {SparsityClass::tight23(), 3}};
  for (const auto& row : rows) {
    INFO("class " << row.cls.name());
    for (int seed = 1; seed <= 40; ++seed) {
      int n_target = 4 + seed % 6;
      auto [g, trace] = random_construct(row.cls, n_target, derive_seed(404, seed));
      INFO("seed " << seed << " target " << n_target);
      CHECK(g.vertex_count() == n_target);
      CHECK(g.edge_count() == 2 * n_target - row.l);
      CHECK(class_check(g, row.cls).verdict);
      CHECK(replay(trace) == g);
    }
    // membership must hold after every intermediate step as well
    for (int seed = 50; seed < 60; ++seed) {
      auto [g, trace] = random_construct(row.cls, 8, derive_seed(505, seed));
      BiColouredMultigraph cur = trace.base;
      CHECK(class_check(cur, row.cls).verdict);
      for (const auto& step : trace.steps) {
        cur = apply_move(cur, step);
        CHECK(class_check(cur, row.cls).verdict);
      }
      CHECK(cur == g);
    }
  }
}

TEST_CASE("random construction is deterministic in the seed", "[moves][construct]") {
  auto cls = SparsityClass::blue_limited();
  auto [g1, t1] = random_construct(cls, 9, 271828);
  auto [g2, t2] = random_construct(cls, 9, 271828);
  CHECK(serialize_graph(g1) == serialize_graph(g2));
  CHECK(trace_to_json(t1).dump() == trace_to_json(t2).dump());
  auto [g3, t3] = random_construct(cls, 9, 271829);
  CHECK(serialize_graph(g1) != serialize_graph(g3));

  CHECK_THROWS_AS(random_construct(SparsityClass::separable({{Colour::blue, 1}, {Colour::red, 1}}),
                                   5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_construct(SparsityClass::tight23(), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_construct(cls, 0, 1), std::invalid_argument);
}

TEST_CASE("reduction rebuilds random members exactly", "[moves][reduce]") {
  for (const auto& cls : {SparsityClass::tight22(), SparsityClass::blue_limited()}) {
    INFO("class " << cls.name());
    for (int seed = 1; seed <= 40; ++seed) {
      int n_target = 4 + seed % 6;
      auto [g, ctrace] = random_construct(cls, n_target, derive_seed(606, seed));
      auto trace = reduce_fully(g, cls);
      INFO("seed " << seed << " target " << n_target);
      CHECK(replay(trace) == g);
      if (cls.kind == SparsityClass::Kind::tight_2_2) {
        CHECK((detail::is_k1(trace.base) || detail::is_k4_base(trace.base)));
      } else {
        CHECK(detail::is_k1(trace.base));
      }
    }
  }
}

TEST_CASE("reduction is invariant under relabelling", "[moves][reduce]") {
  Rng rng(99);
  for (int seed = 1; seed <= 10; ++seed) {
    auto cls = seed % 2 ? SparsityClass::tight22() : SparsityClass::blue_limited();
    auto [g, trace] = random_construct(cls, 7, derive_seed(707, seed));
    auto perm = random_perm(g.vertex_count(), rng);
    auto h = g.relabelled(perm);
    CHECK(class_check(h, cls).verdict == class_check(g, cls).verdict);
    auto rtrace = reduce_fully(h, cls);
    CHECK(replay(rtrace) == h);
  }
}

TEST_CASE("every K4 colouring reduces to a base graph", "[moves][reduce]") {
  auto tight22 = SparsityClass::tight22();
  auto blue_lim = SparsityClass::blue_limited();
  for (unsigned bits = 0; bits < 64; ++bits) {
    auto g = coloured_k4(bits);
    INFO("colour mask " << bits);
    auto trace = reduce_fully(g, tight22);
    CHECK(replay(trace) == g);
    int reds = __builtin_popcount(bits);
    if (reds >= 5 || reds <= 1) {
      CHECK(trace.steps.empty());  // these colourings are base graphs themselves
      CHECK(trace.base == g);
    } else {
      CHECK_FALSE(trace.steps.empty());
    }
    if (reds > 0) {  // the all-blue K4 is the one colouring outside the mixed class
      auto btrace = reduce_fully(g, blue_lim);
      CHECK(replay(btrace) == g);
      CHECK(detail::is_k1(btrace.base));
    }
  }
}

TEST_CASE("glued cliques force a tight-subgraph contraction", "[moves][reduce]") {
  auto cls = SparsityClass::tight22();
  auto g7 = shared_vertex_k4s();
  REQUIRE(class_check(g7, cls).verdict);

  auto step = find_reduction(g7, cls);
  REQUIRE_FALSE(step.at_base);
  // [DERIVED] no vertex has degree 2, every 1-reduction candidate collides
  // inside its clique, and triangle contractions collide as well; the first
  // tight subgraph in (size, mask) order is the wing {0,1,2,3}
  REQUIRE(std::holds_alternative<GraphExtension>(step.move.op));
  CHECK(step.reduced == mono_k4(Colour::blue));
  CHECK(apply_move(step.reduced, step.move) == g7);

  auto trace = reduce_fully(g7, cls);
  CHECK(trace.base == mono_k4(Colour::blue));
  REQUIRE(trace.steps.size() == 1);
  CHECK(replay(trace) == g7);
}

TEST_CASE("splitting the glue vertex forces a triangle contraction", "[moves][reduce]") {
  auto cls = SparsityClass::tight22();
  auto g8 = vertex_split(shared_vertex_k4s(), 0, 1, Colour::blue,
                         {{4, Colour::blue}, {5, Colour::blue}, {6, Colour::blue}});
  REQUIRE(class_check(g8, cls).verdict);

  // [DERIVED] the only legal triangle contraction merges the split pair back:
  // edge (0,7) with apex 1, the moved edges being the second wing
  auto step = find_reduction(g8, cls);
  REQUIRE_FALSE(step.at_base);
  REQUIRE(std::holds_alternative<VertexSplit>(step.move.op));
  const auto& vs = std::get<VertexSplit>(step.move.op);
  CHECK(vs.v == 0);
  CHECK(vs.x == 1);
  CHECK(vs.colour == Colour::blue);
  CHECK(step.reduced == shared_vertex_k4s());
  CHECK(apply_move(step.reduced, step.move) == g8);

  auto trace = reduce_fully(g8, cls);
  CHECK(trace.base == mono_k4(Colour::blue));
  REQUIRE(trace.steps.size() == 2);
  CHECK(std::holds_alternative<GraphExtension>(trace.steps[0].op));
  CHECK(std::holds_alternative<VertexSplit>(trace.steps[1].op));
  CHECK(replay(trace) == g8);
}

TEST_CASE("a red clique reduces through back-substitution", "[moves][reduce]") {
  auto cls = SparsityClass::blue_limited();
  auto red_k4 = mono_k4(Colour::red);
  REQUIRE(class_check(red_k4, cls).verdict);

  // [DERIVED] degree-2 and 1-reductions are all barred (each candidate pair is
  // already red-joined and blue replacements hit the doubled-pair exclusion),
  // so the red-K4 back-substitution at vertex 0 must fire
  auto step = find_reduction(red_k4, cls);
  REQUIRE_FALSE(step.at_base);
  REQUIRE(std::holds_alternative<K2K2Substitution>(step.move.op));
  CHECK(step.reduced == doubled_p3().relabelled({1, 0, 2}));
  CHECK(apply_move(step.reduced, step.move) == red_k4);

  auto trace = reduce_fully(red_k4, cls);
  CHECK(detail::is_k1(trace.base));
  CHECK(replay(trace) == red_k4);
  bool has_sub = false;
  for (const auto& s : trace.steps)
    has_sub = has_sub || std::holds_alternative<K2K2Substitution>(s.op);
  CHECK(has_sub);
}

TEST_CASE("reduction rejects bad inputs and recognises bases", "[moves][reduce]") {
  auto tight22 = SparsityClass::tight22();
  BiColouredMultigraph k1(1);
  CHECK(find_reduction(k1, tight22).at_base);
  CHECK(find_reduction(mono_k4(Colour::blue), tight22).at_base);
  CHECK_FALSE(find_reduction(coloured_k4(0b000111), tight22).at_base);

  BiColouredMultigraph path(3);
  path.add_edge(0, 1, Colour::blue);
  path.add_edge(1, 2, Colour::blue);
  CHECK_THROWS_WITH(find_reduction(path, tight22), ContainsSubstring("class member"));
  CHECK_THROWS_AS(find_reduction(mono_k4(Colour::blue), SparsityClass::blue_limited()),
                  std::invalid_argument);
  CHECK_THROWS_WITH(find_reduction(k1, SparsityClass::tight23()),
                    ContainsSubstring("tight22 and blue-limited"));

  // deterministic: the same member yields byte-identical reduction moves
  auto [g, trace] = random_construct(tight22, 8, 31415);
  auto s1 = find_reduction(g, tight22);
  auto s2 = find_reduction(g, tight22);
  CHECK(move_to_json(s1.move).dump() == move_to_json(s2.move).dump());
  CHECK(s1.reduced == s2.reduced);
}
