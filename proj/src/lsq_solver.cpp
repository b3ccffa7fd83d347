#include "gimg/lsq_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numeric>

namespace gimg {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void check_edge_targets(const QuadMesh& mesh, std::span<const Point2> f) {
  if (f.size() != mesh.edges.size())
    throw SolverError("expected " + std::to_string(mesh.edges.size()) + " edge targets, got " +
                      std::to_string(f.size()));
  for (const Point2& p : f)
    if (!is_finite(p)) throw SolverError("non-finite edge target");
}

/// Right-hand side of the normal equations of sum_e |(v_j - v_i) - f_e|^2.
Eigen::MatrixX2d edge_rhs(const QuadMesh& mesh, std::span<const Point2> f) {
  Eigen::MatrixX2d b = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(mesh.vertices.size()), 2);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    b(i, 0) -= f[e].x;
    b(i, 1) -= f[e].y;
    b(j, 0) += f[e].x;
    b(j, 1) += f[e].y;
  }
  return b;
}

std::vector<int> components(const QuadMesh& mesh) {
  std::vector<int> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  for (const auto& [i, j] : mesh.edges) parent[static_cast<std::size_t>(find(i))] = find(j);
  std::vector<int> comp(mesh.vertices.size());
  for (std::size_t v = 0; v < comp.size(); ++v) comp[v] = find(static_cast<int>(v));
  return comp;
}

std::vector<Point2> solve_spd(const SpMat& a, const Eigen::MatrixX2d& b) {
  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.compute(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("factorization failed");
  const Eigen::MatrixX2d x = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve failed");
  std::vector<Point2> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out[static_cast<std::size_t>(r)] = {x(r, 0), x(r, 1)};
    if (!is_finite(out[static_cast<std::size_t>(r)])) throw SolverError("solution is not finite");
  }
  return out;
}

}  // namespace

std::vector<Point2> solve_constrained(const QuadMesh& mesh, std::span<const VertexTarget> constraints) {
  const std::size_t n = mesh.vertices.size();
  std::vector<int> fixed(n, -1);
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& c = constraints[k];
    if (c.vertex < 0 || static_cast<std::size_t>(c.vertex) >= n) throw SolverError("constraint vertex out of range");
    if (!is_finite(c.target)) throw SolverError("non-finite constraint target");
    if (fixed[static_cast<std::size_t>(c.vertex)] >= 0)
      throw SolverError("vertex " + std::to_string(c.vertex) + " is constrained twice");
    fixed[static_cast<std::size_t>(c.vertex)] = static_cast<int>(k);
  }
  const std::vector<int> comp = components(mesh);
  std::vector<bool> anchored(n, false);
  for (const auto& c : constraints) anchored[static_cast<std::size_t>(comp[static_cast<std::size_t>(c.vertex)])] = true;
  for (std::size_t v = 0; v < n; ++v)
    if (!anchored[static_cast<std::size_t>(comp[v])])
      throw SolverError("system is singular: a mesh component has no constrained vertex");

  std::vector<Point2> out(n);
  std::vector<int> free_index(n, -1);
  int nfree = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (fixed[v] >= 0)
      out[v] = constraints[static_cast<std::size_t>(fixed[v])].target;
    else
      free_index[v] = nfree++;
  }
  if (nfree == 0) return out;

  std::vector<Point2> f(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    f[e] = mesh.vertices[static_cast<std::size_t>(j)] - mesh.vertices[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixX2d full_rhs = edge_rhs(mesh, f);
  Eigen::MatrixX2d b(nfree, 2);
  for (std::size_t v = 0; v < n; ++v)
    if (free_index[v] >= 0) b.row(free_index[v]) = full_rhs.row(static_cast<Eigen::Index>(v));

  std::vector<Triplet> trip;
  trip.reserve(mesh.edges.size() * 4);
  for (const auto& [i, j] : mesh.edges) {
    const int fi = free_index[static_cast<std::size_t>(i)];
    const int fj = free_index[static_cast<std::size_t>(j)];
    if (fi >= 0) trip.emplace_back(fi, fi, 1.0);
    if (fj >= 0) trip.emplace_back(fj, fj, 1.0);
    if (fi >= 0 && fj >= 0) {
      trip.emplace_back(fi, fj, -1.0);
      trip.emplace_back(fj, fi, -1.0);
    } else if (fi >= 0) {
      const Point2 t = out[static_cast<std::size_t>(j)];
      b(fi, 0) += t.x;
      b(fi, 1) += t.y;
    } else if (fj >= 0) {
      const Point2 t = out[static_cast<std::size_t>(i)];
      b(fj, 0) += t.x;
      b(fj, 1) += t.y;
    }
  }
  SpMat a(nfree, nfree);
  a.setFromTriplets(trip.begin(), trip.end());
  const std::vector<Point2> x = solve_spd(a, b);
  for (std::size_t v = 0; v < n; ++v)
    if (free_index[v] >= 0) out[v] = x[static_cast<std::size_t>(free_index[v])];
  return out;
}

std::vector<Point2> solve_anchored(const QuadMesh& mesh, std::span<const Point2> edge_targets, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw SolverError("anchor weight must be positive and finite (rank deficient otherwise)");
  check_edge_targets(mesh, edge_targets);
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  Eigen::MatrixX2d b = edge_rhs(mesh, edge_targets);
  std::vector<Triplet> trip;
  trip.reserve(mesh.edges.size() * 4 + mesh.vertices.size());
  for (const auto& [i, j] : mesh.edges) {
    trip.emplace_back(i, i, 1.0);
    trip.emplace_back(j, j, 1.0);
    trip.emplace_back(i, j, -1.0);
    trip.emplace_back(j, i, -1.0);
  }
  for (Eigen::Index v = 0; v < n; ++v) {
    trip.emplace_back(v, v, w);
    b(v, 0) += w * mesh.vertices[static_cast<std::size_t>(v)].x;
    b(v, 1) += w * mesh.vertices[static_cast<std::size_t>(v)].y;
  }
  SpMat a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return solve_spd(a, b);
}

double constrained_objective(const QuadMesh& mesh, std::span<const Point2> deformed) {
  double s = 0.0;
  for (const auto& [i, j] : mesh.edges) {
    const Point2 d = (deformed[static_cast<std::size_t>(j)] - deformed[static_cast<std::size_t>(i)]) -
                     (mesh.vertices[static_cast<std::size_t>(j)] - mesh.vertices[static_cast<std::size_t>(i)]);
    s += dot(d, d);
  }
  return s;
}

double anchored_objective(const QuadMesh& mesh, std::span<const Point2> edge_targets, double w,
                          std::span<const Point2> positions) {
  double s = 0.0;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    const Point2 d = (positions[static_cast<std::size_t>(j)] - positions[static_cast<std::size_t>(i)]) - edge_targets[e];
    s += dot(d, d);
  }
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point2 d = positions[v] - mesh.vertices[v];
    s += w * dot(d, d);
  }
  return s;
}

}  // namespace gimg
