#pragma once

#include <span>
#include <vector>

#include "gimg/geometry.hpp"
#include "gimg/quad_mesh.hpp"

namespace gimg {

class SolverError : public Error {
 public:
  using Error::Error;
};

struct VertexTarget {
  int vertex = 0;
  Point2 target;
};

/// Finds deformed positions that keep every edge vector of the mesh as close
/// as possible to its undeformed value while pinning the constrained vertices
/// exactly. Throws SolverError when some connected component of the mesh has
/// no constraint, or a vertex is constrained twice.
std::vector<Point2> solve_constrained(const QuadMesh& mesh, std::span<const VertexTarget> constraints);

/// Finds positions whose edge vectors best match `edge_targets` (one per mesh
/// edge), with a soft pull of weight `w` towards the lattice positions.
/// Throws SolverError for w <= 0.
std::vector<Point2> solve_anchored(const QuadMesh& mesh, std::span<const Point2> edge_targets, double w);

/// Objectives, for checking solutions.
double constrained_objective(const QuadMesh& mesh, std::span<const Point2> deformed);
double anchored_objective(const QuadMesh& mesh, std::span<const Point2> edge_targets, double w,
                          std::span<const Point2> positions);

}  // namespace gimg
