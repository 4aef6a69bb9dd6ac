#ifndef RIGIDITY_NUMERIC_HPP
#define RIGIDITY_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/contexts.hpp"
#include "rigidity/coloured_graph.hpp"
#include "rigidity/random.hpp"

namespace rigidity {

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
  double tol = 0.0;                     // relative threshold used
};

inline RankResult numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be positive");
  RankResult out;
  out.tol = tol;
  if (m.rows() == 0 || m.cols() == 0) return out;
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  double top = out.singular_values.empty() ? 0.0 : out.singular_values.front();
  if (top > 0.0)
    for (double s : out.singular_values)
      if (s > tol * top) ++out.rank;
  return out;
}

// orthonormal kernel basis, one column per kernel dimension
inline Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.cols() == 0) return Eigen::MatrixXd(0, 0);
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double top = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  if (top > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * top) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

// max relative error between analytic rows and central differences of the functional
inline double fd_check(const ContextSpec& ctx, const ColouredEdge& bar, const Placement& p,
                       double h = 1e-6) {
  if (bar.u == bar.v) throw std::invalid_argument("loop bars have no row");
  const auto& pi = p.at(bar.u);
  const auto& pj = p.at(bar.v);
  auto [ri, rj] = edge_rows(ctx, bar.colour, pi, pj);
  int d = ctx.ambient_dim();
  double rowmax = std::max(ri.cwiseAbs().maxCoeff(), rj.cwiseAbs().maxCoeff());
  double denom = std::max(rowmax, 1e-8);
  double worst = 0.0;
  for (int side = 0; side < 2; ++side) {
    const Eigen::VectorXd& analytic = side == 0 ? ri : rj;
    for (int k = 0; k < d; ++k) {
      auto shifted = [&](double delta) {
        std::vector<double> qi = pi, qj = pj;
        (side == 0 ? qi : qj)[k] += delta;
        return edge_functional(ctx, bar.colour, qi, qj);
      };
      double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
      worst = std::max(worst, std::fabs(analytic[k] - fd) / denom);
    }
  }
  return worst;
}

enum class RigidityStatus { minimally_rigid, rigid_redundant, flexible };

inline std::string status_string(RigidityStatus s) {
  switch (s) {
    case RigidityStatus::minimally_rigid: return "minimally-rigid";
    case RigidityStatus::rigid_redundant: return "rigid-redundant";
    case RigidityStatus::flexible: return "flexible";
  }
  return "?";
}

struct RigidityVerdict {
  RigidityStatus status = RigidityStatus::flexible;
  int achieved_rank = 0;
  int required_rank = 0;
  int trials = 0;
  std::vector<double> singular_values;  // from the best trial
};

inline bool maxwell_audit(const ContextSpec& ctx, const BiColouredMultigraph& g) {
  return g.edge_count() == 2 * g.vertex_count() - trivial_dim(ctx);
}

inline int required_rank(const ContextSpec& ctx, int n) {
  return ctx.ambient_dim() * n - trivial_dim(ctx);
}

// generic placements can only lose rank, so the max over trials is the verdict
inline RigidityVerdict decide_rigidity(const ContextSpec& ctx, const BiColouredMultigraph& g,
                                       int trials = 5, std::uint64_t seed = 0,
                                       double tol = 1e-9) {
  if (g.has_loops()) throw std::invalid_argument("loop bars have no row");
  int n = g.vertex_count();
  if (n < min_vertices(ctx))
    throw std::invalid_argument("too few joints for this context");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  RigidityVerdict out;
  out.required_rank = required_rank(ctx, n);
  out.trials = trials;
  double best_gap = -1.0;
  for (int t = 0; t < trials; ++t) {
    Placement p = random_placement(ctx, n, derive_seed(seed, static_cast<std::uint64_t>(t)));
    RankResult r = numerical_rank(assemble(ctx, g, p).m, tol);
    // among max-rank trials, keep the best-conditioned spectrum
    double gap = r.rank > 0 ? r.singular_values[static_cast<size_t>(r.rank) - 1] /
                                  r.singular_values[0]
                            : 0.0;
    if (r.rank > out.achieved_rank || (r.rank == out.achieved_rank && gap > best_gap)) {
      out.achieved_rank = r.rank;
      out.singular_values = r.singular_values;
      best_gap = gap;
    }
  }
  if (out.achieved_rank == out.required_rank)
    out.status = maxwell_audit(ctx, g) ? RigidityStatus::minimally_rigid
                                       : RigidityStatus::rigid_redundant;
  else
    out.status = RigidityStatus::flexible;
  return out;
}

inline nlohmann::ordered_json verdict_to_json(const RigidityVerdict& v) {
  nlohmann::ordered_json j;
  j["status"] = status_string(v.status);
  j["achieved_rank"] = v.achieved_rank;
  j["required_rank"] = v.required_rank;
  j["trials"] = v.trials;
  j["singular_values"] = v.singular_values;
  return j;
}

}  // namespace rigidity

#endif
