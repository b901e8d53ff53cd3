#include "fdflow/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace fdflow {

namespace {

void finalize_edges(Mesh& mesh) {
  // Map endpoint pairs to edge ids. std::map keeps the enumeration
  // deterministic across platforms.
  std::map<std::pair<Index, Index>, Index> lookup;
  mesh.edges.clear();
  mesh.tri_edges.assign(mesh.triangles.size(), {-1, -1, -1});

  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int le = 0; le < 3; ++le) {
      Index va = tri[le];
      Index vb = tri[(le + 1) % 3];
      if (va > vb) std::swap(va, vb);
      auto key = std::make_pair(va, vb);
      auto it = lookup.find(key);
      Index eid;
      if (it == lookup.end()) {
        eid = static_cast<Index>(mesh.edges.size());
        lookup.emplace(key, eid);
        Edge e;
        e.a = va;
        e.b = vb;
        e.midpoint = 0.5 * (mesh.vertices[va] + mesh.vertices[vb]);
        mesh.edges.push_back(e);
      } else {
        eid = it->second;
      }
      Edge& e = mesh.edges[eid];
      if (e.n_tris < 2) e.tris[e.n_tris] = t;
      ++e.n_tris;
      mesh.tri_edges[t][le] = eid;
    }
  }

  for (Edge& e : mesh.edges) {
    if (e.n_tris > 2) throw std::runtime_error("mesh: non-manifold edge");
    e.boundary = (e.n_tris == 1);
  }

  mesh.vertex_on_boundary.assign(mesh.vertices.size(), false);
  for (const Edge& e : mesh.edges) {
    if (e.boundary) {
      mesh.vertex_on_boundary[e.a] = true;
      mesh.vertex_on_boundary[e.b] = true;
    }
  }
}

}  // namespace

Mesh build_uniform(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform: n must be >= 1");

  Mesh mesh;
  mesh.h = 2.0 * std::sqrt(2.0) / n;
  mesh.is_split = false;

  const int nv = n + 1;
  mesh.vertices.reserve(static_cast<size_t>(nv) * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) {
      mesh.vertices.push_back({-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n});
    }
  }

  auto vid = [nv](int i, int j) { return static_cast<Index>(j * nv + i); };

  mesh.triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Index ll = vid(i, j);
      Index lr = vid(i + 1, j);
      Index ur = vid(i + 1, j + 1);
      Index ul = vid(i, j + 1);
      mesh.triangles.push_back({ll, lr, ur});
      mesh.triangles.push_back({ll, ur, ul});
    }
  }

  mesh.parent.assign(mesh.triangles.size(), -1);
  finalize_edges(mesh);
  return mesh;
}

Mesh alfeld_split(const Mesh& mesh) {
  if (mesh.is_split) throw std::invalid_argument("alfeld_split: mesh already split");

  Mesh out;
  out.h = mesh.h;
  out.is_split = true;
  out.vertices = mesh.vertices;
  out.vertices.reserve(mesh.vertices.size() + mesh.triangles.size());
  out.triangles.reserve(3 * mesh.triangles.size());
  out.parent.reserve(3 * mesh.triangles.size());

  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec2 bary = (1.0 / 3.0) * (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] +
                               mesh.vertices[tri[2]]);
    Index m = static_cast<Index>(out.vertices.size());
    out.vertices.push_back(bary);
    out.triangles.push_back({tri[0], tri[1], m});
    out.triangles.push_back({tri[1], tri[2], m});
    out.triangles.push_back({tri[2], tri[0], m});
    out.parent.push_back(t);
    out.parent.push_back(t);
    out.parent.push_back(t);
  }

  finalize_edges(out);
  return out;
}

std::vector<Edge> edge_table(const Mesh& mesh) { return mesh.edges; }

void dump(const Mesh& mesh, std::ostream& os) {
  char buf[96];
  for (const Vec2& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x, v.y);
    os << buf;
  }
  for (const auto& tri : mesh.triangles) {
    std::snprintf(buf, sizeof(buf), "%d %d %d\n", tri[0], tri[1], tri[2]);
    os << buf;
  }
}

}  // namespace fdflow
