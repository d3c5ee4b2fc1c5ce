#include "eh/trimesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "eh/errors.hpp"

namespace eh {

namespace {

inline std::int64_t undirected_key(int a, int b, int n) {
  int lo = a < b ? a : b;
  int hi = a < b ? b : a;
  return static_cast<std::int64_t>(lo) * n + hi;
}

inline std::int64_t directed_key(int a, int b, int n) {
  return static_cast<std::int64_t>(a) * n + b;
}

}  // namespace

int TriMesh::edge_count() const {
  const int n = vertex_count();
  std::unordered_set<std::int64_t> edges;
  edges.reserve(3 * F.cols());
  for (int f = 0; f < F.cols(); ++f) {
    for (int c = 0; c < 3; ++c) {
      edges.insert(undirected_key(F(c, f), F((c + 1) % 3, f), n));
    }
  }
  return static_cast<int>(edges.size());
}

int TriMesh::euler_characteristic() const {
  return vertex_count() - edge_count() + face_count();
}

std::vector<std::vector<int>> TriMesh::boundary_loops() const {
  const int n = vertex_count();
  std::unordered_map<std::int64_t, int> undirected;
  undirected.reserve(3 * F.cols());
  for (int f = 0; f < F.cols(); ++f) {
    for (int c = 0; c < 3; ++c) {
      undirected[undirected_key(F(c, f), F((c + 1) % 3, f), n)] += 1;
    }
  }
  // Boundary edges keep the direction their single face traverses them in.
  std::unordered_map<int, int> next;
  for (int f = 0; f < F.cols(); ++f) {
    for (int c = 0; c < 3; ++c) {
      const int a = F(c, f), b = F((c + 1) % 3, f);
      if (undirected.at(undirected_key(a, b, n)) == 1) {
        if (next.count(a)) throw validation_error("non-manifold boundary: vertex on more than one boundary edge pair");
        next[a] = b;
      }
    }
  }
  std::vector<std::vector<int>> loops;
  std::unordered_set<int> seen;
  for (const auto& [start, unused] : next) {
    (void)unused;
    if (seen.count(start)) continue;
    std::vector<int> loop;
    int v = start;
    do {
      loop.push_back(v);
      seen.insert(v);
      auto it = next.find(v);
      if (it == next.end()) throw validation_error("boundary walk left an open chain; mesh is not manifold");
      v = it->second;
    } while (v != start);
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<char> TriMesh::boundary_vertex_mask() const {
  std::vector<char> mask(vertex_count(), 0);
  for (const auto& loop : boundary_loops())
    for (int v : loop) mask[v] = 1;
  return mask;
}

void TriMesh::validate() const {
  const int n = vertex_count();
  if (n < 3 || face_count() < 1) throw validation_error("mesh needs at least one face");
  if (!fixed_mask.empty() && static_cast<int>(fixed_mask.size()) != n)
    throw validation_error("fixed_mask size does not match vertex count");
  if (!V.allFinite()) throw validation_error("mesh has non-finite vertex coordinates");

  std::unordered_map<std::int64_t, int> undirected, directed;
  undirected.reserve(3 * F.cols());
  directed.reserve(3 * F.cols());
  double area_sum = 0.0;
  std::vector<double> areas(F.cols());
  for (int f = 0; f < F.cols(); ++f) {
    const int a = F(0, f), b = F(1, f), c = F(2, f);
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
      throw validation_error("face references a vertex out of range");
    if (a == b || b == c || c == a) throw validation_error("face repeats a vertex");
    areas[f] = 0.5 * (V.col(b) - V.col(a)).cross(V.col(c) - V.col(a)).norm();
    area_sum += areas[f];
    for (int k = 0; k < 3; ++k) {
      const int u = F(k, f), v = F((k + 1) % 3, f);
      undirected[undirected_key(u, v, n)] += 1;
      if (++directed[directed_key(u, v, n)] > 1)
        throw validation_error("inconsistent winding: directed edge appears twice");
    }
  }
  for (const auto& [key, count] : undirected) {
    (void)key;
    if (count > 2) throw validation_error("edge shared by more than two faces");
  }
  const double mean_area = area_sum / face_count();
  for (int f = 0; f < F.cols(); ++f) {
    if (!(areas[f] > 1e-14 * mean_area)) throw validation_error("degenerate face (area below 1e-14 of mean)");
  }
  boundary_loops();  // throws on non-manifold boundary structure
}

TriMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open OBJ file: " + path);
  std::vector<Eigen::Vector3d> verts;
  std::vector<Eigen::Vector3i> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw validation_error("malformed vertex line in " + path);
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // accept v, v/vt, v//vn, v/vt/vn
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
      }
      if (idx.size() < 3) throw validation_error("face with fewer than 3 vertices in " + path);
      for (size_t k = 1; k + 1 < idx.size(); ++k)
        faces.push_back({idx[0] - 1, idx[k] - 1, idx[k + 1] - 1});
    }
  }
  TriMesh mesh;
  mesh.V.resize(3, static_cast<int>(verts.size()));
  for (size_t i = 0; i < verts.size(); ++i) mesh.V.col(static_cast<int>(i)) = verts[i];
  mesh.F.resize(3, static_cast<int>(faces.size()));
  for (size_t f = 0; f < faces.size(); ++f) mesh.F.col(static_cast<int>(f)) = faces[f];
  mesh.validate();
  return mesh;
}

void write_obj(const TriMesh& mesh, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw validation_error("cannot open for writing: " + path);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    std::fprintf(out, "v %.17g %.17g %.17g\n", mesh.V(0, i), mesh.V(1, i), mesh.V(2, i));
  for (int f = 0; f < mesh.face_count(); ++f)
    std::fprintf(out, "f %d %d %d\n", mesh.F(0, f) + 1, mesh.F(1, f) + 1, mesh.F(2, f) + 1);
  std::fclose(out);
}

std::vector<std::vector<int>> vertex_face_adjacency(const TriMesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f)
    for (int c = 0; c < 3; ++c) adj[mesh.F(c, f)].push_back(f);
  return adj;
}

std::vector<std::vector<int>> vertex_vertex_adjacency(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<std::unordered_set<int>> sets(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int c = 0; c < 3; ++c) {
      const int a = mesh.F(c, f), b = mesh.F((c + 1) % 3, f);
      sets[a].insert(b);
      sets[b].insert(a);
    }
  }
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) adj[i].assign(sets[i].begin(), sets[i].end());
  return adj;
}

double total_area(const TriMesh& mesh) {
  double area = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    area += 0.5 * (mesh.V.col(mesh.F(1, f)) - mesh.V.col(mesh.F(0, f)))
                      .cross(mesh.V.col(mesh.F(2, f)) - mesh.V.col(mesh.F(0, f)))
                      .norm();
  }
  return area;
}

}  // namespace eh
