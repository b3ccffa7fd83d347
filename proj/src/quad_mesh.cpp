#include "gimg/quad_mesh.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace gimg {

int QuadMesh::cell_index(CellCoord c) const {
  const auto it = std::lower_bound(cells.begin(), cells.end(), c);
  if (it == cells.end() || *it != c) return -1;
  return static_cast<int>(it - cells.begin());
}

bool QuadMesh::is_boundary_vertex(int v) const {
  for (const auto& loop : boundary)
    for (const auto& s : loop)
      if (s.from == v) return true;
  return false;
}

namespace {

struct UnionFind {
  std::array<int, 4> parent{0, 1, 2, 3};
  int find(int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]); }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

QuadMesh build_quad_mesh(std::span<const CellCoord> input, const CutPredicate& is_cut) {
  if (input.empty()) throw Error("build_quad_mesh: empty cell set");
  QuadMesh m;
  m.cells.assign(input.begin(), input.end());
  std::sort(m.cells.begin(), m.cells.end());
  m.cells.erase(std::unique(m.cells.begin(), m.cells.end()), m.cells.end());
  const auto has = [&](int x, int y) { return m.cell_index({x, y}) >= 0; };
  const auto cut = [&](const LatticeEdge& e) { return is_cut && is_cut(e); };

  {  // 4-connectivity
    std::vector<bool> seen(m.cells.size(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
      const CellCoord c = m.cells[q.front()];
      q.pop();
      for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int k = m.cell_index({c.x + dx, c.y + dy});
        if (k >= 0 && !seen[static_cast<std::size_t>(k)]) {
          seen[static_cast<std::size_t>(k)] = true;
          ++count;
          q.push(static_cast<std::size_t>(k));
        }
      }
    }
    if (count != m.cells.size()) throw Error("build_quad_mesh: cell set is not 4-connected");
  }

  // Group the cells around every lattice point. Quadrant order: BL, BR, TL, TR.
  struct Key {
    int y, x, first_cell;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, int> group_vertex;                                  // (point, group) -> placeholder id
  std::map<std::tuple<int, int, int>, Key> corner_group;            // (point x, point y, quadrant) -> key
  std::set<std::pair<int, int>> points;
  for (const auto& c : m.cells)
    for (int dy = 0; dy <= 1; ++dy)
      for (int dx = 0; dx <= 1; ++dx) points.insert({c.y + dy, c.x + dx});

  for (const auto& [py, px] : points) {
    const std::array<CellCoord, 4> quad{{{px - 1, py - 1}, {px, py - 1}, {px - 1, py}, {px, py}}};
    std::array<bool, 4> present{};
    for (std::size_t q = 0; q < 4; ++q) present[q] = has(quad[q].x, quad[q].y);
    UnionFind uf;
    const auto link = [&](int a, int b, const LatticeEdge& e) {
      if (present[static_cast<std::size_t>(a)] && present[static_cast<std::size_t>(b)] && !cut(e)) uf.unite(a, b);
    };
    link(0, 1, {px, py - 1, false});
    link(2, 3, {px, py, false});
    link(0, 2, {px - 1, py, true});
    link(1, 3, {px, py, true});
    for (int q = 0; q < 4; ++q) {
      if (!present[static_cast<std::size_t>(q)]) continue;
      int first = std::numeric_limits<int>::max();
      for (int r = 0; r < 4; ++r)
        if (present[static_cast<std::size_t>(r)] && uf.find(r) == uf.find(q))
          first = std::min(first, m.cell_index(quad[static_cast<std::size_t>(r)]));
      const Key key{py, px, first};
      group_vertex.emplace(key, 0);
      corner_group[{px, py, q}] = key;
    }
  }
  int next = 0;
  for (auto& [key, id] : group_vertex) {
    id = next++;
    m.vertices.push_back({static_cast<double>(key.x), static_cast<double>(key.y)});
  }

  m.corners.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    const auto [x, y] = m.cells[i];
    // Quadrant of this cell as seen from each of its corners.
    const auto vid = [&](int px, int py, int q) { return group_vertex.at(corner_group.at({px, py, q})); };
    m.corners[i] = {vid(x, y, 3), vid(x + 1, y, 2), vid(x + 1, y + 1, 0), vid(x, y + 1, 1)};
  }

  std::map<std::pair<int, int>, int> edge_id;
  m.cell_edges.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    const auto& k = m.corners[i];
    const std::array<std::pair<int, int>, 4> sides{{{k[0], k[1]}, {k[1], k[2]}, {k[3], k[2]}, {k[0], k[3]}}};
    for (std::size_t s = 0; s < 4; ++s) {
      const auto [it, inserted] = edge_id.emplace(sides[s], static_cast<int>(m.edges.size()));
      if (inserted) m.edges.push_back(sides[s]);
      m.cell_edges[i][s] = it->second;
    }
  }

  // Boundary half-edges, counter-clockwise around each cell.
  std::map<int, BoundaryStep> outgoing;
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    const auto [x, y] = m.cells[i];
    const auto& k = m.corners[i];
    const std::array<BoundaryStep, 4> steps{{
        {k[0], k[1], static_cast<int>(i), CellSide::Bottom, {x, y, true}},
        {k[1], k[2], static_cast<int>(i), CellSide::Right, {x + 1, y, false}},
        {k[2], k[3], static_cast<int>(i), CellSide::Top, {x, y + 1, true}},
        {k[3], k[0], static_cast<int>(i), CellSide::Left, {x, y, false}},
    }};
    const std::array<CellCoord, 4> across{{{x, y - 1}, {x + 1, y}, {x, y + 1}, {x - 1, y}}};
    for (std::size_t s = 0; s < 4; ++s) {
      if (has(across[s].x, across[s].y) && !cut(steps[s].edge)) continue;
      if (!outgoing.emplace(steps[s].from, steps[s]).second)
        throw Error("build_quad_mesh: non-manifold boundary vertex");
    }
  }
  while (!outgoing.empty()) {
    std::vector<BoundaryStep> loop;
    int v = outgoing.begin()->first;
    for (;;) {
      const auto it = outgoing.find(v);
      if (it == outgoing.end()) break;
      loop.push_back(it->second);
      v = it->second.to;
      outgoing.erase(it);
    }
    if (loop.empty() || loop.back().to != loop.front().from) throw Error("build_quad_mesh: open boundary loop");
    m.boundary.push_back(std::move(loop));
  }
  const auto loop_area = [&](const std::vector<BoundaryStep>& loop) {
    Polyline p;
    for (const auto& s : loop) p.push_back(m.vertices[static_cast<std::size_t>(s.from)]);
    return signed_area(p);
  };
  std::stable_sort(m.boundary.begin(), m.boundary.end(),
                   [&](const auto& a, const auto& b) { return loop_area(a) > loop_area(b); });
  return m;
}

}  // namespace gimg
