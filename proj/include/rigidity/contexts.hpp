#ifndef RIGIDITY_CONTEXTS_HPP
#define RIGIDITY_CONTEXTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/coloured_graph.hpp"
#include "rigidity/random.hpp"

namespace rigidity {

struct ContextSpec {
  enum class Kind { cylinder, sphere, mixed_lq, dl_euclidean, dl_lq, separable };
  Kind kind = Kind::mixed_lq;
  double q = 0.0;                                // exponent for mixed_lq / dl_lq
  std::vector<std::pair<Colour, int>> blocks;    // separable only: (colour, dim)

  static ContextSpec cylinder() { return {Kind::cylinder, 0.0, {}}; }
  static ContextSpec sphere() { return {Kind::sphere, 0.0, {}}; }
  static ContextSpec mixed_lq(double q) { return checked_q({Kind::mixed_lq, q, {}}); }
  static ContextSpec dl_euclidean() { return {Kind::dl_euclidean, 0.0, {}}; }
  static ContextSpec dl_lq(double q) { return checked_q({Kind::dl_lq, q, {}}); }
  static ContextSpec separable(std::vector<std::pair<Colour, int>> blocks) {
    if (blocks.size() != 2 || blocks[0].first == blocks[1].first)
      throw std::invalid_argument("separable context needs two blocks with distinct colours");
    for (const auto& [c, dim] : blocks)
      if (dim != 1 && dim != 2) throw std::invalid_argument("block dimensions must be 1 or 2");
    return {Kind::separable, 0.0, std::move(blocks)};
  }

  int ambient_dim() const {
    switch (kind) {
      case Kind::cylinder:
      case Kind::sphere:
        return 3;
      case Kind::separable: {
        int d = 0;
        for (const auto& [c, dim] : blocks) d += dim;
        return d;
      }
      default:
        return 2;
    }
  }

  // column offset and width of the block a colour constrains (separable only)
  std::pair<int, int> block_of(Colour c) const {
    int offset = 0;
    for (const auto& [bc, dim] : blocks) {
      if (bc == c) return {offset, dim};
      offset += dim;
    }
    throw std::logic_error("colour has no block");
  }

  std::string kind_string() const {
    switch (kind) {
      case Kind::cylinder: return "cylinder";
      case Kind::sphere: return "sphere";
      case Kind::mixed_lq: return "mixed-lq";
      case Kind::dl_euclidean: return "dl-euclidean";
      case Kind::dl_lq: return "dl-lq";
      case Kind::separable: return "separable";
    }
    return "?";
  }

  std::string name() const {
    switch (kind) {
      case Kind::mixed_lq: return "mixed-lq(q=" + format_q(q) + ")";
      case Kind::dl_lq: return "dl-lq(q=" + format_q(q) + ")";
      case Kind::separable: {
        std::string s = "separable(";
        for (size_t i = 0; i < blocks.size(); ++i) {
          if (i) s += ",";
          s += colour_code(blocks[i].first);
          s += std::to_string(blocks[i].second);
        }
        return s + ")";
      }
      default: return kind_string();
    }
  }

 private:
  static ContextSpec checked_q(ContextSpec c) {
    if (!(c.q > 1.0) || !std::isfinite(c.q)) throw std::invalid_argument("q must lie in (1, inf)");
    if (c.q == 2.0) throw std::invalid_argument("q = 2 is the plain Euclidean case; use q != 2");
    return c;
  }
  static std::string format_q(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", q);
    return buf;
  }
};

inline int trivial_dim(const ContextSpec& ctx) {
  switch (ctx.kind) {
    case ContextSpec::Kind::sphere:
      return 3;
    case ContextSpec::Kind::separable:
      return ctx.ambient_dim();  // one translation per block dimension
    default:
      return 2;  // two translations, or axial translation + rotation on the cylinder
  }
}

// smallest vertex count at which the trivial flexes are linearly independent
inline int min_vertices(const ContextSpec& ctx) {
  return ctx.kind == ContextSpec::Kind::sphere ? 2 : 1;
}

// one point per vertex, ambient_dim coordinates each
using Placement = std::vector<std::vector<double>>;

inline nlohmann::ordered_json context_to_json(const ContextSpec& ctx) {
  nlohmann::ordered_json j;
  j["kind"] = ctx.kind_string();
  if (ctx.kind == ContextSpec::Kind::mixed_lq || ctx.kind == ContextSpec::Kind::dl_lq)
    j["q"] = ctx.q;
  if (ctx.kind == ContextSpec::Kind::separable) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [c, dim] : ctx.blocks)
      arr.push_back({std::string(1, colour_code(c)), dim});
    j["blocks"] = arr;
  }
  return j;
}

inline ContextSpec context_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("context must be an object with a kind");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "cylinder") return ContextSpec::cylinder();
  if (kind == "sphere") return ContextSpec::sphere();
  if (kind == "dl-euclidean") return ContextSpec::dl_euclidean();
  if (kind == "mixed-lq" || kind == "dl-lq") {
    if (!j.contains("q")) throw std::invalid_argument("this context kind needs q");
    double q = j["q"].get<double>();
    return kind == "mixed-lq" ? ContextSpec::mixed_lq(q) : ContextSpec::dl_lq(q);
  }
  if (kind == "separable") {
    if (!j.contains("blocks")) throw std::invalid_argument("separable context needs blocks");
    std::vector<std::pair<Colour, int>> blocks;
    for (const auto& b : j["blocks"])
      blocks.emplace_back(colour_from_code(b[0].get<std::string>()), b[1].get<int>());
    return ContextSpec::separable(std::move(blocks));
  }
  throw std::invalid_argument("unknown context kind: " + kind);
}

inline nlohmann::ordered_json placement_to_json(const ContextSpec& ctx, const Placement& p) {
  nlohmann::ordered_json j;
  j["context"] = context_to_json(ctx);
  j["coords"] = p;
  return j;
}

inline std::pair<ContextSpec, Placement> placement_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("context") || !j.contains("coords"))
    throw std::invalid_argument("placement must carry context and coords");
  ContextSpec ctx = context_from_json(j["context"]);
  Placement p = j["coords"].get<Placement>();
  for (const auto& point : p)
    if (static_cast<int>(point.size()) != ctx.ambient_dim())
      throw std::invalid_argument("coordinate arity does not match the context");
  return {std::move(ctx), std::move(p)};
}

// --- placements -----------------------------------------------------------------

namespace detail {

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

inline double gaussian(Rng& rng) {
  double u1 = 1.0 - rng.real();  // (0, 1]
  double u2 = rng.real();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// quality >= 1 means every margin constraint is met
inline double placement_quality(const ContextSpec& ctx, const Placement& p) {
  using Kind = ContextSpec::Kind;
  int n = static_cast<int>(p.size());
  double quality = std::numeric_limits<double>::infinity();
  auto update = [&](double value, double threshold) {
    quality = std::min(quality, value / threshold);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (ctx.kind == Kind::cylinder) {
        double dth = std::fabs(wrap_angle(std::atan2(p[i][1], p[i][0]) -
                                          std::atan2(p[j][1], p[j][0])));
        update(dth, 0.1);
        update(std::numbers::pi - dth, 0.1);
      } else if (ctx.kind == Kind::sphere) {
        double dot = p[i][0] * p[j][0] + p[i][1] * p[j][1] + p[i][2] * p[j][2];
        double ang = std::acos(std::clamp(dot, -1.0, 1.0));
        update(ang, 0.1);
        update(std::numbers::pi - ang, 0.1);
      } else {
        for (size_t k = 0; k < p[i].size(); ++k)
          update(std::fabs(p[i][k] - p[j][k]), 0.05);
      }
    }
  return quality;
}

}  // namespace detail

// margins per context: planar coordinates differ by >= 0.05 pairwise, cylinder
// principal angle gaps lie in [0.1, pi - 0.1], sphere pairwise angles likewise
inline Placement random_placement(const ContextSpec& ctx, int n, std::uint64_t seed) {
  using Kind = ContextSpec::Kind;
  if (n < 1) throw std::invalid_argument("placement needs at least one joint");
  Rng rng(seed);
  int d = ctx.ambient_dim();
  Placement best;
  double best_quality = -1.0;
  for (int attempt = 0; attempt < 2000; ++attempt) {
    Placement p(n);
    for (int v = 0; v < n; ++v) {
      auto& pt = p[v];
      if (ctx.kind == Kind::cylinder) {
        double theta = 2.0 * std::numbers::pi * rng.real();
        pt = {std::cos(theta), std::sin(theta), rng.real(-1.0, 1.0)};
      } else if (ctx.kind == Kind::sphere) {
        double norm = 0.0;
        while (norm < 1e-3) {
          pt = {detail::gaussian(rng), detail::gaussian(rng), detail::gaussian(rng)};
          norm = std::sqrt(pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]);
        }
        for (double& c : pt) c /= norm;
      } else {
        pt.resize(d);
        for (double& c : pt) c = rng.real(-1.0, 1.0);
      }
    }
    double quality = detail::placement_quality(ctx, p);
    if (quality >= 1.0) return p;
    if (quality > best_quality) {
      best_quality = quality;
      best = std::move(p);
    }
  }
  return best;  // after bounded resampling, the best-margin candidate wins
}

// --- rows -----------------------------------------------------------------------

using RowPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

inline RowPair euclidean_sq_row(const std::vector<double>& pi, const std::vector<double>& pj) {
  int d = static_cast<int>(pi.size());
  Eigen::VectorXd a(d), b(d);
  double norm2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double delta = pi[k] - pj[k];
    norm2 += delta * delta;
    a[k] = 2.0 * delta;
    b[k] = -2.0 * delta;
  }
  if (norm2 < 1e-24) throw std::invalid_argument("coincident joints on a distance bar");
  return {a, b};
}

inline RowPair lq_pow_row(double q, const std::vector<double>& pi,
                          const std::vector<double>& pj) {
  if (!(q > 1.0)) throw std::invalid_argument("q must lie in (1, inf)");
  int d = static_cast<int>(pi.size());
  Eigen::VectorXd a(d), b(d);
  double norm2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double delta = pi[k] - pj[k];
    norm2 += delta * delta;
    double g = delta == 0.0 ? 0.0
                            : q * (delta > 0 ? 1.0 : -1.0) * std::pow(std::fabs(delta), q - 1.0);
    a[k] = g;
    b[k] = -g;
  }
  if (norm2 < 1e-24) throw std::invalid_argument("coincident joints on a distance bar");
  return {a, b};
}

inline RowPair direction_row(const std::vector<double>& pi, const std::vector<double>& pj) {
  double dx = pi[0] - pj[0];
  double dy = pi[1] - pj[1];
  if (std::fabs(dx) < 1e-12) throw std::invalid_argument("vertical bar on a direction constraint");
  Eigen::VectorXd a(2), b(2);
  a[0] = -2.0 * dy * dy / (dx * dx * dx);
  a[1] = 2.0 * dy / (dx * dx);
  b = -a;
  return {a, b};
}

namespace detail {

inline void require_on_cylinder(const std::vector<double>& p) {
  if (std::fabs(p[0] * p[0] + p[1] * p[1] - 1.0) > 1e-12)
    throw std::invalid_argument("joint off the unit cylinder");
}

inline void require_on_sphere(const std::vector<double>& p) {
  if (std::fabs(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1.0) > 1e-12)
    throw std::invalid_argument("joint off the unit sphere");
}

}  // namespace detail

inline RowPair cylinder_rows(Colour colour, const std::vector<double>& pi,
                             const std::vector<double>& pj) {
  detail::require_on_cylinder(pi);
  detail::require_on_cylinder(pj);
  if (colour == Colour::blue) return euclidean_sq_row(pi, pj);
  double dth = detail::wrap_angle(std::atan2(pi[1], pi[0]) - std::atan2(pj[1], pj[0]));
  double dz = pi[2] - pj[2];
  if (std::fabs(dth) > std::numbers::pi - 1e-9)
    throw std::invalid_argument("red cylinder bar too close to the cut locus");
  Eigen::VectorXd a(3), b(3);
  a << 2.0 * dth * -pi[1], 2.0 * dth * pi[0], 2.0 * dz;
  b << -2.0 * dth * -pj[1], -2.0 * dth * pj[0], -2.0 * dz;
  return {a, b};
}

inline RowPair sphere_rows(Colour colour, const std::vector<double>& pi,
                           const std::vector<double>& pj) {
  detail::require_on_sphere(pi);
  detail::require_on_sphere(pj);
  if (colour == Colour::blue) return euclidean_sq_row(pi, pj);
  double dot = pi[0] * pj[0] + pi[1] * pj[1] + pi[2] * pj[2];
  if (1.0 - dot * dot < 1e-18)
    throw std::invalid_argument("coincident or antipodal joints on a geodesic bar");
  double s = std::sqrt(1.0 - dot * dot);
  Eigen::VectorXd a(3), b(3);
  for (int k = 0; k < 3; ++k) {
    a[k] = -pj[k] / s;
    b[k] = -pi[k] / s;
  }
  return {a, b};
}

inline RowPair separable_rows(const ContextSpec& ctx, Colour colour,
                              const std::vector<double>& pi, const std::vector<double>& pj) {
  auto [offset, dim] = ctx.block_of(colour);
  int d = ctx.ambient_dim();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d), b = Eigen::VectorXd::Zero(d);
  double norm2 = 0.0;
  for (int k = 0; k < dim; ++k) {
    double delta = pi[offset + k] - pj[offset + k];
    norm2 += delta * delta;
    a[offset + k] = 2.0 * delta;
    b[offset + k] = -2.0 * delta;
  }
  if (norm2 < 1e-24) throw std::invalid_argument("degenerate block difference");
  return {a, b};
}

// gradient rows of the separation functional for one bar, at joints i then j
inline RowPair edge_rows(const ContextSpec& ctx, Colour colour, const std::vector<double>& pi,
                         const std::vector<double>& pj) {
  using Kind = ContextSpec::Kind;
  switch (ctx.kind) {
    case Kind::cylinder:
      return cylinder_rows(colour, pi, pj);
    case Kind::sphere:
      return sphere_rows(colour, pi, pj);
    case Kind::mixed_lq:
      return colour == Colour::blue ? euclidean_sq_row(pi, pj) : lq_pow_row(ctx.q, pi, pj);
    case Kind::dl_euclidean:
      return colour == Colour::blue ? direction_row(pi, pj) : euclidean_sq_row(pi, pj);
    case Kind::dl_lq:
      return colour == Colour::blue ? direction_row(pi, pj) : lq_pow_row(ctx.q, pi, pj);
    case Kind::separable:
      return separable_rows(ctx, colour, pi, pj);
  }
  throw std::logic_error("unhandled context kind");
}

// the scalar separation functional whose gradient the rows are (ambient extension)
inline double edge_functional(const ContextSpec& ctx, Colour colour,
                              const std::vector<double>& pi, const std::vector<double>& pj) {
  using Kind = ContextSpec::Kind;
  auto sq = [&](int from, int count) {
    double s = 0.0;
    for (int k = from; k < from + count; ++k) {
      double delta = pi[k] - pj[k];
      s += delta * delta;
    }
    return s;
  };
  switch (ctx.kind) {
    case Kind::cylinder: {
      if (colour == Colour::blue) return sq(0, 3);
      double dth = detail::wrap_angle(std::atan2(pi[1], pi[0]) - std::atan2(pj[1], pj[0]));
      double dz = pi[2] - pj[2];
      return dth * dth + dz * dz;
    }
    case Kind::sphere: {
      if (colour == Colour::blue) return sq(0, 3);
      return std::acos(pi[0] * pj[0] + pi[1] * pj[1] + pi[2] * pj[2]);
    }
    case Kind::mixed_lq:
    case Kind::dl_lq: {
      if (colour == Colour::red) {
        double s = 0.0;
        for (size_t k = 0; k < pi.size(); ++k) s += std::pow(std::fabs(pi[k] - pj[k]), ctx.q);
        return s;
      }
      if (ctx.kind == Kind::mixed_lq) return sq(0, 2);
      double r = (pi[1] - pj[1]) / (pi[0] - pj[0]);
      return r * r;
    }
    case Kind::dl_euclidean: {
      if (colour == Colour::red) return sq(0, 2);
      double r = (pi[1] - pj[1]) / (pi[0] - pj[0]);
      return r * r;
    }
    case Kind::separable: {
      auto [offset, dim] = ctx.block_of(colour);
      return sq(offset, dim);
    }
  }
  throw std::logic_error("unhandled context kind");
}

inline Eigen::VectorXd normal_row(const ContextSpec& ctx, const std::vector<double>& p) {
  Eigen::VectorXd r(3);
  if (ctx.kind == ContextSpec::Kind::cylinder) {
    detail::require_on_cylinder(p);
    r << p[0], p[1], 0.0;
    return r;
  }
  if (ctx.kind == ContextSpec::Kind::sphere) {
    detail::require_on_sphere(p);
    r << p[0], p[1], p[2];
    return r;
  }
  throw std::invalid_argument("only surface contexts have normal rows");
}

// --- assembled matrix -------------------------------------------------------------

struct RowLabel {
  bool is_normal = false;
  ColouredEdge edge{0, 0, Colour::blue};  // valid when !is_normal
  int vertex = -1;                        // valid when is_normal
};

struct RigidityMatrix {
  Eigen::MatrixXd m;
  std::vector<RowLabel> labels;
  int ambient = 2;
};

inline bool has_normal_rows(const ContextSpec& ctx) {
  return ctx.kind == ContextSpec::Kind::cylinder || ctx.kind == ContextSpec::Kind::sphere;
}

inline RigidityMatrix assemble(const ContextSpec& ctx, const BiColouredMultigraph& g,
                               const Placement& p) {
  int n = g.vertex_count();
  int d = ctx.ambient_dim();
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("placement has the wrong number of joints");
  for (const auto& pt : p)
    if (static_cast<int>(pt.size()) != d)
      throw std::invalid_argument("coordinate arity does not match the context");
  if (g.has_loops())
    throw std::invalid_argument("loop bars have constant separation; no row exists");

  int rows = g.edge_count() + (has_normal_rows(ctx) ? n : 0);
  RigidityMatrix out;
  out.ambient = d;
  out.m = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n) * d);
  int r = 0;
  for (const auto& e : g.edges()) {
    try {
      auto [ri, rj] = edge_rows(ctx, e.colour, p[e.u], p[e.v]);
      out.m.block(r, e.u * d, 1, d) = ri.transpose();
      out.m.block(r, e.v * d, 1, d) = rj.transpose();
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("row for edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + "," + colour_code(e.colour) +
                                  "): " + err.what());
    }
    out.labels.push_back({false, e, -1});
    ++r;
  }
  if (has_normal_rows(ctx))
    for (int v = 0; v < n; ++v) {
      out.m.block(r, v * d, 1, d) = normal_row(ctx, p[v]).transpose();
      out.labels.push_back({true, {0, 0, Colour::blue}, v});
      ++r;
    }
  return out;
}

// columns are the rigid-motion flexes at p
inline Eigen::MatrixXd trivial_flex_basis(const ContextSpec& ctx, const Placement& p) {
  using Kind = ContextSpec::Kind;
  int n = static_cast<int>(p.size());
  int d = ctx.ambient_dim();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * d,
                                                trivial_dim(ctx));
  switch (ctx.kind) {
    case Kind::mixed_lq:
    case Kind::dl_euclidean:
    case Kind::dl_lq:
      for (int v = 0; v < n; ++v) {
        basis(v * 2 + 0, 0) = 1.0;
        basis(v * 2 + 1, 1) = 1.0;
      }
      break;
    case Kind::cylinder:
      for (int v = 0; v < n; ++v) {
        basis(v * 3 + 2, 0) = 1.0;          // axial translation
        basis(v * 3 + 0, 1) = -p[v][1];     // rotation about the axis
        basis(v * 3 + 1, 1) = p[v][0];
      }
      break;
    case Kind::sphere:
      for (int axis = 0; axis < 3; ++axis)
        for (int v = 0; v < n; ++v) {
          // omega x p for omega = e_axis
          int a = (axis + 1) % 3, b = (axis + 2) % 3;
          basis(v * 3 + a, axis) = -p[v][b];
          basis(v * 3 + b, axis) = p[v][a];
        }
      break;
    case Kind::separable: {
      int col = 0, offset = 0;
      for (const auto& [c, dim] : ctx.blocks) {
        for (int k = 0; k < dim; ++k, ++col)
          for (int v = 0; v < n; ++v) basis(v * d + offset + k, col) = 1.0;
        offset += dim;
      }
      break;
    }
  }
  return basis;
}

}  // namespace rigidity

#endif
