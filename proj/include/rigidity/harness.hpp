#ifndef RIGIDITY_HARNESS_HPP
#define RIGIDITY_HARNESS_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidity/contexts.hpp"
#include "rigidity/coloured_graph.hpp"
#include "rigidity/moves.hpp"
#include "rigidity/numeric.hpp"
#include "rigidity/random.hpp"
#include "rigidity/sparsity.hpp"

namespace rigidity {

enum class TheoremId {
  sphere_23,
  cylinder_22,
  mixed_plane,
  direction_length_lq,
  direction_length_euclidean,  // supplementary result
  separable,
};

inline std::string theorem_string(TheoremId id) {
  switch (id) {
    case TheoremId::sphere_23: return "sphere-23";
    case TheoremId::cylinder_22: return "cylinder-22";
    case TheoremId::mixed_plane: return "mixed-plane";
    case TheoremId::direction_length_lq: return "direction-length-lq";
    case TheoremId::direction_length_euclidean: return "direction-length-euclidean";
    case TheoremId::separable: return "separable";
  }
  return "?";
}

inline TheoremId theorem_from_string(const std::string& s) {
  for (TheoremId id : {TheoremId::sphere_23, TheoremId::cylinder_22, TheoremId::mixed_plane,
                       TheoremId::direction_length_lq, TheoremId::direction_length_euclidean,
                       TheoremId::separable})
    if (theorem_string(id) == s) return id;
  throw std::invalid_argument("unknown theorem: " + s);
}

inline bool theorem_supplementary(TheoremId id) {
  return id == TheoremId::direction_length_euclidean;
}

inline ContextSpec theorem_context(TheoremId id, double q = 3.0) {
  switch (id) {
    case TheoremId::sphere_23: return ContextSpec::sphere();
    case TheoremId::cylinder_22: return ContextSpec::cylinder();
    case TheoremId::mixed_plane: return ContextSpec::mixed_lq(q);
    case TheoremId::direction_length_lq: return ContextSpec::dl_lq(q);
    case TheoremId::direction_length_euclidean: return ContextSpec::dl_euclidean();
    case TheoremId::separable:
      return ContextSpec::separable({{Colour::blue, 1}, {Colour::red, 1}});
  }
  throw std::logic_error("unhandled theorem");
}

inline SparsityClass theorem_class(TheoremId id) {
  switch (id) {
    case TheoremId::sphere_23: return SparsityClass::tight23();
    case TheoremId::cylinder_22: return SparsityClass::tight22();
    case TheoremId::mixed_plane:
    case TheoremId::direction_length_lq:
      return SparsityClass::blue_limited();
    case TheoremId::direction_length_euclidean: return SparsityClass::mono_limited();
    case TheoremId::separable:
      return SparsityClass::separable({{Colour::blue, 1}, {Colour::red, 1}});
  }
  throw std::logic_error("unhandled theorem");
}

// smallest member size each sampler supports
inline int theorem_min_vertices(TheoremId id) {
  switch (id) {
    case TheoremId::sphere_23:
    case TheoremId::separable:
      return 2;
    default:
      return 1;
  }
}

namespace detail {

// uniform labelled tree on n vertices via a random Pruefer sequence
inline std::vector<std::pair<int, int>> random_spanning_tree(Rng& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  if (n <= 1) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<int> seq(n - 2);
  for (int& s : seq) s = rng.below(n);
  std::vector<int> degree(n, 1);
  for (int s : seq) ++degree[s];
  std::set<int> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.insert(v);
  for (int s : seq) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, s);
    if (--degree[s] == 1) leaves.insert(s);
  }
  int a = *leaves.begin();
  int b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return edges;
}

}  // namespace detail

// a random class member: construction traces where moves exist, a two-tree
// union for the separable class (pairs may carry both colours)
inline BiColouredMultigraph random_member(TheoremId id, int n, std::uint64_t seed) {
  if (n < theorem_min_vertices(id))
    throw std::invalid_argument("member size below the sampler minimum");
  if (id != TheoremId::separable) return random_construct(theorem_class(id), n, seed).first;
  Rng rng(seed);
  BiColouredMultigraph g(n);
  for (auto [u, v] : detail::random_spanning_tree(rng, n)) g.add_edge(u, v, Colour::blue);
  for (auto [u, v] : detail::random_spanning_tree(rng, n)) g.add_edge(u, v, Colour::red);
  return g;
}

namespace detail {

// rewrite the induced subgraph on four vertices into a single all-blue K4,
// then rebalance the edge count away from those vertices
inline BiColouredMultigraph plant_blue_k4(const BiColouredMultigraph& g, Rng& rng) {
  int n = g.vertex_count();
  if (n < 4) throw std::invalid_argument("planting a K4 needs at least four vertices");
  int target = g.edge_count();
  std::vector<int> picks;
  while (static_cast<int>(picks.size()) < 4) {
    int v = rng.below(n);
    bool seen = false;
    for (int w : picks) seen = seen || w == v;
    if (!seen) picks.push_back(v);
  }
  std::set<int> s(picks.begin(), picks.end());
  auto inside = [&](const ColouredEdge& e) { return s.count(e.u) && s.count(e.v); };

  BiColouredMultigraph mutant = g;
  for (const auto& e : g.edges())
    if (inside(e)) mutant.remove_edge(e.u, e.v, e.colour);
  for (auto it = s.begin(); it != s.end(); ++it)
    for (auto jt = std::next(it); jt != s.end(); ++jt)
      mutant.add_edge(*it, *jt, Colour::blue);

  for (int guard = 0; mutant.edge_count() > target; ++guard) {
    if (guard > 1000) throw std::runtime_error("could not rebalance the planted mutant");
    auto edges = mutant.edges();
    const auto& e = edges[rng.below(static_cast<int>(edges.size()))];
    if (!inside(e)) mutant.remove_edge(e.u, e.v, e.colour);
  }
  for (int guard = 0; mutant.edge_count() < target; ++guard) {
    if (guard > 1000) throw std::runtime_error("could not rebalance the planted mutant");
    int u = rng.below(n), v = rng.below(n);
    Colour c = rng.colour();
    if (u == v || (s.count(u) && s.count(v)) || mutant.has_edge(u, v, c)) continue;
    mutant.add_edge(u, v, c);
  }
  return mutant;
}

// swap one edge for a fresh one until the class predicate fails
inline BiColouredMultigraph replace_edge_until_broken(const BiColouredMultigraph& g,
                                                      const SparsityClass& cls, Rng& rng) {
  int n = g.vertex_count();
  if (g.edge_count() == 0) throw std::invalid_argument("no edge to replace");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto edges = g.edges();
    const auto& out = edges[rng.below(static_cast<int>(edges.size()))];
    int u = rng.below(n), v = rng.below(n);
    Colour c = rng.colour();
    if (u == v || g.has_edge(u, v, c)) continue;
    BiColouredMultigraph mutant = g;
    mutant.remove_edge(out.u, out.v, out.colour);
    mutant.add_edge(u, v, c);
    if (!class_check(mutant, cls).verdict) return mutant;
  }
  throw std::runtime_error("could not synthesize a negative control");
}

}  // namespace detail

// a Maxwell-count-preserving graph that fails the class predicate
inline BiColouredMultigraph negative_mutant(TheoremId id, const BiColouredMultigraph& g,
                                            std::uint64_t seed) {
  Rng rng(seed);
  switch (id) {
    case TheoremId::mixed_plane:
    case TheoremId::direction_length_lq:
    case TheoremId::direction_length_euclidean:
      return detail::plant_blue_k4(g, rng);
    default:
      return detail::replace_edge_until_broken(g, theorem_class(id), rng);
  }
}

// smallest size at which the theorem's negative mutant exists
inline int theorem_min_negative_vertices(TheoremId id) {
  switch (id) {
    case TheoremId::mixed_plane:
    case TheoremId::direction_length_lq:
    case TheoremId::direction_length_euclidean:
      return 4;  // the planted K4 needs four vertices
    case TheoremId::cylinder_22:
      // with three joints every monochrome-simple 4-edge graph is (2,2)-tight,
      // so no replacement can break the class before four joints
      return 4;
    default:
      return std::max(3, theorem_min_vertices(id));  // room for a replacement edge
  }
}

// some members admit no class-breaking replacement (a K4 construction base
// uses every pair once, so one edge move never overfills a subgraph); draw
// fresh members until one yields a mutant
inline std::pair<BiColouredMultigraph, BiColouredMultigraph> sample_negative(
    TheoremId id, int n, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 50; ++attempt) {
    auto base = random_member(id, n, derive_seed(seed, 2 * attempt));
    try {
      return {base, negative_mutant(id, base, derive_seed(seed, 2 * attempt + 1))};
    } catch (const std::runtime_error&) {
      // replacement-robust member; resample
    }
  }
  throw std::runtime_error("could not synthesize a negative control");
}

struct CampaignConfig {
  TheoremId theorem = TheoremId::cylinder_22;
  int samples = 50;
  int n_min = 2;
  int n_max = 10;
  std::uint64_t seed = 0;
  double q = 3.0;   // exponent where the context uses one
  int trials = 5;   // placements per rigidity decision
  double tol = 1e-9;
  bool negatives = true;
};

struct VerificationReport {
  bool ok = false;
  nlohmann::ordered_json report;
};

inline VerificationReport verify_theorem(const CampaignConfig& cfg) {
  if (cfg.n_max > 12) throw std::invalid_argument("campaign sizes are capped at 12 joints");
  if (cfg.samples < 1) throw std::invalid_argument("campaign needs at least one sample");
  int n_min = std::max(cfg.n_min, theorem_min_vertices(cfg.theorem));
  if (n_min > cfg.n_max) throw std::invalid_argument("empty size range");
  int neg_min = std::max(n_min, theorem_min_negative_vertices(cfg.theorem));

  ContextSpec ctx = theorem_context(cfg.theorem, cfg.q);
  SparsityClass cls = theorem_class(cfg.theorem);

  Rng sizes(derive_seed(cfg.seed, 0));
  auto positives_failures = nlohmann::ordered_json::array();
  auto negatives_failures = nlohmann::ordered_json::array();

  auto record = [](nlohmann::ordered_json& sink, int sample, const BiColouredMultigraph& g,
                   const std::string& why, const RigidityVerdict& v) {
    sink.push_back({{"sample", sample},
                    {"n", g.vertex_count()},
                    {"why", why},
                    {"status", status_string(v.status)},
                    {"achieved_rank", v.achieved_rank},
                    {"required_rank", v.required_rank},
                    {"graph", graph_to_json(g)}});
  };

  for (int i = 0; i < cfg.samples; ++i) {
    int n = sizes.range(n_min, cfg.n_max);
    auto member = random_member(cfg.theorem, n, derive_seed(cfg.seed, 4 * i + 1));
    auto v = decide_rigidity(ctx, member, cfg.trials, derive_seed(cfg.seed, 4 * i + 3),
                             cfg.tol);
    if (!class_check(member, cls).verdict)
      record(positives_failures, i, member, "member fails its own class", v);
    else if (!maxwell_audit(ctx, member))
      record(positives_failures, i, member, "member misses the Maxwell count", v);
    else if (v.status != RigidityStatus::minimally_rigid)
      record(positives_failures, i, member, "member is not minimally rigid", v);

    if (!cfg.negatives) continue;
    int m = sizes.range(neg_min, std::max(neg_min, cfg.n_max));
    auto [base, mutant] = sample_negative(cfg.theorem, m, derive_seed(cfg.seed, 4 * i + 2));
    auto w = decide_rigidity(ctx, mutant, cfg.trials, derive_seed(cfg.seed, 4 * i + 3),
                             cfg.tol);
    if (!maxwell_audit(ctx, mutant))
      record(negatives_failures, i, mutant, "mutant misses the Maxwell count", w);
    else if (class_check(mutant, cls).verdict)
      record(negatives_failures, i, mutant, "mutant still satisfies the class", w);
    else if (w.status != RigidityStatus::flexible)
      record(negatives_failures, i, mutant, "mutant is not flexible", w);
  }

  VerificationReport out;
  out.ok = positives_failures.empty() && negatives_failures.empty();
  out.report["theorem"] = theorem_string(cfg.theorem);
  out.report["supplementary"] = theorem_supplementary(cfg.theorem);
  out.report["context"] = context_to_json(ctx);
  out.report["class"] = cls.name();
  out.report["config"] = {{"samples", cfg.samples}, {"n_min", n_min},
                          {"n_max", cfg.n_max},     {"seed", cfg.seed},
                          {"trials", cfg.trials},   {"tol", cfg.tol},
                          {"negatives", cfg.negatives}};
  out.report["positives"] = {{"total", cfg.samples},
                             {"failed", positives_failures.size()},
                             {"failures", positives_failures}};
  out.report["negatives"] = {{"total", cfg.negatives ? cfg.samples : 0},
                             {"failed", negatives_failures.size()},
                             {"failures", negatives_failures}};
  out.report["ok"] = out.ok;
  return out;
}

// replays the full reduction of g, holding every intermediate to the class
// predicate and a minimal-rigidity decision; returns the number of moves
inline int cross_check_reduction(const ContextSpec& ctx, const SparsityClass& cls,
                                 const BiColouredMultigraph& g, int trials = 5,
                                 std::uint64_t seed = 0) {
  ConstructionTrace trace = reduce_fully(g, cls);
  BiColouredMultigraph current = trace.base;
  int at = 0;
  auto check = [&](const BiColouredMultigraph& h) {
    if (!class_check(h, cls).verdict)
      throw std::runtime_error("reduction intermediate " + std::to_string(at) +
                               " fails the class predicate");
    auto v = decide_rigidity(ctx, h, trials, derive_seed(seed, static_cast<std::uint64_t>(at)));
    if (v.status != RigidityStatus::minimally_rigid)
      throw std::runtime_error("reduction intermediate " + std::to_string(at) +
                               " is not minimally rigid");
  };
  check(current);
  for (const auto& step : trace.steps) {
    current = apply_move(current, step);
    ++at;
    check(current);
  }
  if (!(current == g)) throw std::runtime_error("replaying the reduction does not restore the input");
  return static_cast<int>(trace.steps.size());
}

}  // namespace rigidity

#endif
