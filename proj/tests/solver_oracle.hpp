#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <set>
#include <vector>

#include "gimg/lsq_solver.hpp"

namespace gimg::test {

/// Random 4-connected cell set grown from one cell, at most `max_vertices`
/// lattice vertices.
inline std::vector<CellCoord> random_cells(std::mt19937_64& rng, int max_vertices) {
  std::set<CellCoord> cells = {{0, 0}};
  std::set<std::pair<int, int>> verts = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::uniform_int_distribution<int> target(1, 40);
  const int n = target(rng);
  for (int tries = 0; tries < 400 && static_cast<int>(cells.size()) < n; ++tries) {
    auto it = cells.begin();
    std::advance(it, static_cast<long>(rng() % cells.size()));
    static const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    const int d = static_cast<int>(rng() % 4);
    const CellCoord c{it->x + dx[d], it->y + dy[d]};
    if (cells.count(c)) continue;
    auto v = verts;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v.insert({c.x + i, c.y + j});
    if (static_cast<int>(v.size()) > max_vertices) break;
    verts = std::move(v);
    cells.insert(c);
  }
  return {cells.begin(), cells.end()};
}

inline Eigen::MatrixXd incidence(const QuadMesh& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<long>(m.edges.size()), static_cast<long>(m.vertices.size()));
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    d(static_cast<long>(e), m.edges[e].first) = -1;
    d(static_cast<long>(e), m.edges[e].second) = 1;
  }
  return d;
}

inline Eigen::MatrixXd positions(const QuadMesh& m) {
  Eigen::MatrixXd v(static_cast<long>(m.vertices.size()), 2);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) v.row(static_cast<long>(i)) << m.vertices[i].x, m.vertices[i].y;
  return v;
}

/// Dense KKT solve of min |D x - D v|^2 s.t. x_k = t_k.
inline Eigen::MatrixXd dense_constrained(const QuadMesh& m, const std::vector<VertexTarget>& cons) {
  const Eigen::MatrixXd d = incidence(m);
  const long n = d.cols();
  const long k = static_cast<long>(cons.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
  kkt.topLeftCorner(n, n) = 2.0 * d.transpose() * d;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + k, 2);
  rhs.topRows(n) = 2.0 * d.transpose() * d * positions(m);
  for (long i = 0; i < k; ++i) {
    kkt(n + i, cons[static_cast<std::size_t>(i)].vertex) = 1;
    kkt(cons[static_cast<std::size_t>(i)].vertex, n + i) = 1;
    rhs(n + i, 0) = cons[static_cast<std::size_t>(i)].target.x;
    rhs(n + i, 1) = cons[static_cast<std::size_t>(i)].target.y;
  }
  return kkt.fullPivLu().solve(rhs).topRows(n);
}

/// Dense QR solve of the stacked system [D; sqrt(w) I] x = [f; sqrt(w) v].
inline Eigen::MatrixXd dense_anchored(const QuadMesh& m, const std::vector<Point2>& f, double w) {
  const Eigen::MatrixXd d = incidence(m);
  const long e = d.rows(), n = d.cols();
  Eigen::MatrixXd a(e + n, n);
  a.topRows(e) = d;
  a.bottomRows(n) = std::sqrt(w) * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b(e + n, 2);
  for (long i = 0; i < e; ++i) b.row(i) << f[static_cast<std::size_t>(i)].x, f[static_cast<std::size_t>(i)].y;
  b.bottomRows(n) = std::sqrt(w) * positions(m);
  return a.colPivHouseholderQr().solve(b);
}

inline double max_diff(const std::vector<Point2>& x, const Eigen::MatrixXd& ref) {
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d = std::max({d, std::abs(x[i].x - ref(static_cast<long>(i), 0)), std::abs(x[i].y - ref(static_cast<long>(i), 1))});
  return d;
}

inline std::vector<Point2> nominal_edges(const QuadMesh& m, double scale = 1.0) {
  std::vector<Point2> f;
  for (const auto& [a, b] : m.edges) f.push_back(scale * (m.vertices[b] - m.vertices[a]));
  return f;
}

}  // namespace gimg::test
