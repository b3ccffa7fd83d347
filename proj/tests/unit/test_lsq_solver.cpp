#include <doctest.h>

#include <random>
#include <set>

#include "gimg/lsq_solver.hpp"
#include "solver_oracle.hpp"

using namespace gimg;

using namespace gimg::test;

TEST_CASE("constrained solve matches dense KKT oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const QuadMesh m = build_quad_mesh(random_cells(rng, 100));
    REQUIRE(m.vertices.size() <= 100);
    std::vector<VertexTarget> cons;
    std::set<int> used;
    const int k = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) {
      const int v = static_cast<int>(rng() % m.vertices.size());
      if (used.insert(v).second) cons.push_back({v, {u(rng), u(rng)}});
    }
    const auto x = solve_constrained(m, cons);
    worst = std::max(worst, max_diff(x, dense_constrained(m, cons)));
    for (const VertexTarget& c : cons) CHECK(x[static_cast<std::size_t>(c.vertex)] == c.target);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("anchored solve matches dense QR oracle") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> lw(-3.0, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const QuadMesh m = build_quad_mesh(random_cells(rng, 100));
    std::vector<Point2> f;
    for (std::size_t e = 0; e < m.edges.size(); ++e) f.push_back({u(rng), u(rng)});
    const double w = trial % 2 ? 1.0 : std::pow(10.0, lw(rng));
    worst = std::max(worst, max_diff(solve_anchored(m, f, w), dense_anchored(m, f, w)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("identity and scaling are exact") {
  const std::vector<CellCoord> cells = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  const QuadMesh m = build_quad_mesh(cells);
  // Constrained: pin two corners at their lattice positions.
  std::vector<VertexTarget> cons = {{0, m.vertices[0]}, {static_cast<int>(m.vertices.size()) - 1, m.vertices.back()}};
  auto x = solve_constrained(m, cons);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(distance(x[i], m.vertices[i]) <= 1e-9);
  // Boundary pinned at doubled positions: the doubled (linear) field is
  // harmonic, so the interior follows exactly.
  std::vector<CellCoord> big;
  for (int y = 0; y < 4; ++y)
    for (int x0 = 0; x0 < 4; ++x0) big.push_back({x0, y});
  const QuadMesh b = build_quad_mesh(big);
  std::vector<VertexTarget> rim;
  for (int v = 0; v < static_cast<int>(b.vertices.size()); ++v)
    if (b.is_boundary_vertex(v)) rim.push_back({v, 2.0 * b.vertices[static_cast<std::size_t>(v)]});
  x = solve_constrained(b, rim);
  REQUIRE(rim.size() < b.vertices.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(distance(x[i], 2.0 * b.vertices[i]) <= 1e-9);

  for (double w : {1e-3, 1.0, 10.0}) {
    x = solve_anchored(m, nominal_edges(m), w);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(distance(x[i], m.vertices[i]) <= 1e-9);
  }
}

TEST_CASE("anchored single cell doubles about its centroid as w -> 0") {
  const std::vector<CellCoord> one = {{3, 5}};
  const QuadMesh m = build_quad_mesh(one);
  const auto x = solve_anchored(m, nominal_edges(m, 2.0), 1e-6);
  const Point2 c{3.5, 5.5};
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(distance(x[i], c + 2.0 * (m.vertices[i] - c)) <= 1e-3);
}

TEST_CASE("objective never worse than the undeformed candidate") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const QuadMesh m = build_quad_mesh(random_cells(rng, 60));
    std::vector<Point2> f;
    for (std::size_t e = 0; e < m.edges.size(); ++e) f.push_back({u(rng), u(rng)});
    const auto x = solve_anchored(m, f, 1.0);
    CHECK(anchored_objective(m, f, 1.0, x) <= anchored_objective(m, f, 1.0, m.vertices) + 1e-12);
    const std::vector<VertexTarget> cons = {{0, {u(rng), u(rng)}}};
    const auto y = solve_constrained(m, cons);
    std::vector<Point2> shifted = m.vertices;
    for (Point2& p : shifted) p += cons[0].target - m.vertices[0];
    CHECK(constrained_objective(m, y) <= constrained_objective(m, shifted) + 1e-12);
  }
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(3);
  const QuadMesh m = build_quad_mesh(random_cells(rng, 100));
  std::vector<Point2> f = nominal_edges(m, 1.3);
  const auto a = solve_anchored(m, f, 0.5);
  const auto b = solve_anchored(m, f, 0.5);
  CHECK(a == b);
}

TEST_CASE("solver errors") {
  const std::vector<CellCoord> cells = {{0, 0}, {1, 0}};
  const QuadMesh m = build_quad_mesh(cells);
  CHECK_THROWS_AS(solve_constrained(m, {}), SolverError);
  const std::vector<VertexTarget> dup = {{0, {0, 0}}, {0, {1, 1}}};
  CHECK_THROWS_AS(solve_constrained(m, dup), SolverError);
  const auto f = nominal_edges(m);
  CHECK_THROWS_AS(solve_anchored(m, f, 0.0), SolverError);
  CHECK_THROWS_AS(solve_anchored(m, f, -1.0), SolverError);
  CHECK_THROWS_AS(solve_anchored(m, std::vector<Point2>(f.begin(), f.end() - 1), 1.0), SolverError);

  // Two mesh components (a cut separates them) need a constraint each.
  const QuadMesh cut = build_quad_mesh(cells, [](const LatticeEdge& e) { return !e.horizontal && e.x == 1; });
  const std::vector<VertexTarget> one = {{0, {0, 0}}};
  CHECK_THROWS_AS(solve_constrained(cut, one), SolverError);
}
