#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace eh {

// Triangle mesh: vertices as columns of V, faces as columns of F (consistent
// winding). Boundary loops are returned in the direction induced by the
// incident faces, so a disc whose normals point along +z has a counterclockwise
// boundary loop when viewed from +z.
struct TriMesh {
  Eigen::Matrix3Xd V;
  Eigen::Matrix3Xi F;
  std::vector<char> fixed_mask;  // per-vertex; empty means all free

  int vertex_count() const { return static_cast<int>(V.cols()); }
  int face_count() const { return static_cast<int>(F.cols()); }
  int edge_count() const;
  int euler_characteristic() const;  // V - E + F

  std::vector<std::vector<int>> boundary_loops() const;
  std::vector<char> boundary_vertex_mask() const;

  // Checks index ranges, per-edge face counts (<= 2), winding consistency of
  // shared edges, face areas (> 1e-14 * mean area) and manifold boundary.
  void validate() const;
};

TriMesh read_obj(const std::string& path);
void write_obj(const TriMesh& mesh, const std::string& path);

std::vector<std::vector<int>> vertex_face_adjacency(const TriMesh& mesh);
std::vector<std::vector<int>> vertex_vertex_adjacency(const TriMesh& mesh);

double total_area(const TriMesh& mesh);

}  // namespace eh
