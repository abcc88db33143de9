// Copyright 2026 arraymom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arraymom/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace arraymom {

void parallelFor(long count, int nthreads,
                 const std::function<void(long, long)>& fn) {
  nthreads = resolveThreads(nthreads);
  if (nthreads <= 1 || count < 2) {
    fn(0, count);
    return;
  }
  const long workers = std::min<long>(nthreads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex mu;
  std::exception_ptr first;
  for (long w = 0; w < workers; ++w) {
    const long lo = count * w / workers;
    const long hi = count * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::scoped_lock lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

int resolveThreads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Vec3 TriangleMesh::triCentroid(int t) const {
  const auto& tri = triangles[t - 1];
  return (vertex(tri[0]) + vertex(tri[1]) + vertex(tri[2])) / 3.0;
}

double TriangleMesh::triArea(int t) const {
  const auto& tri = triangles[t - 1];
  const Vec3 a = vertex(tri[1]) - vertex(tri[0]);
  const Vec3 b = vertex(tri[2]) - vertex(tri[0]);
  return 0.5 * a.cross(b).norm();
}

namespace {

// Strips comments and surrounding whitespace; empty result means skip.
std::string cleanLine(const std::string& raw) {
  std::string line = raw;
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = line.find_last_not_of(" \t\r\n");
  return line.substr(first, last - first + 1);
}

[[noreturn]] void parseFail(const std::string& origin, int lineno,
                            const std::string& msg) {
  throw UserError(origin + ":" + std::to_string(lineno) + ": " + msg);
}

}  // namespace

TriangleMesh parseMesh(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto nextLine = [&](std::string* out) -> bool {
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = cleanLine(raw);
      if (!line.empty()) {
        *out = line;
        return true;
      }
    }
    return false;
  };

  std::string line;
  if (!nextLine(&line) || line != "mesh v1")
    parseFail(origin, lineno, "expected header 'mesh v1'");

  TriangleMesh mesh;
  long vcount = -1;
  if (!nextLine(&line) || std::sscanf(line.c_str(), "vertices %ld", &vcount) != 1 ||
      vcount < 0)
    parseFail(origin, lineno, "expected 'vertices <count>'");
  mesh.vertices.reserve(vcount);
  for (long i = 0; i < vcount; ++i) {
    double x, y, z;
    if (!nextLine(&line) || std::sscanf(line.c_str(), "%lf %lf %lf", &x, &y, &z) != 3)
      parseFail(origin, lineno, "expected vertex line '<x> <y> <z>'");
    mesh.vertices.emplace_back(x, y, z);
  }

  long tcount = -1;
  if (!nextLine(&line) || std::sscanf(line.c_str(), "triangles %ld", &tcount) != 1 ||
      tcount < 0)
    parseFail(origin, lineno, "expected 'triangles <count>'");
  mesh.triangles.reserve(tcount);
  for (long i = 0; i < tcount; ++i) {
    int a, b, c;
    if (!nextLine(&line) || std::sscanf(line.c_str(), "%d %d %d", &a, &b, &c) != 3)
      parseFail(origin, lineno, "expected triangle line '<i> <j> <k>'");
    mesh.triangles.push_back({a, b, c});
  }
  if (nextLine(&line)) parseFail(origin, lineno, "trailing content: " + line);

  validateMesh(mesh);
  return mesh;
}

TriangleMesh loadMesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open mesh file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseMesh(buf.str(), path);
}

void saveMesh(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write mesh file: " + path);
  out << "mesh v1\n";
  out << "vertices " << mesh.vertexCount() << "\n";
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  out << "triangles " << mesh.triangleCount() << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (!out) throw UserError("failed writing mesh file: " + path);
}

void validateMesh(const TriangleMesh& mesh) {
  const int nv = mesh.vertexCount();
  for (int t = 1; t <= mesh.triangleCount(); ++t) {
    const auto& tri = mesh.tri(t);
    for (int c = 0; c < 3; ++c)
      if (tri[c] < 1 || tri[c] > nv)
        throw UserError("triangle " + std::to_string(t) +
                        " references missing vertex " + std::to_string(tri[c]));
    if (tri[0] == tri[1] || tri[0] == tri[2] || tri[1] == tri[2])
      throw UserError("triangle " + std::to_string(t) +
                      " has repeated vertex indices");
    if (mesh.triArea(t) <= kAreaEpsilon)
      throw UserError("triangle " + std::to_string(t) + " is degenerate (area " +
                      std::to_string(mesh.triArea(t)) + " m^2)");
  }
}

RwgBasis buildRwgBasis(const TriangleMesh& mesh) {
  // Map (min vertex, max vertex) -> adjacent triangles.
  std::map<std::array<int, 2>, std::vector<int>> adj;
  for (int t = 1; t <= mesh.triangleCount(); ++t) {
    const auto& tri = mesh.tri(t);
    for (int c = 0; c < 3; ++c) {
      int a = tri[c], b = tri[(c + 1) % 3];
      if (a > b) std::swap(a, b);
      adj[{a, b}].push_back(t);
    }
  }

  RwgBasis basis;
  for (const auto& [verts, tris] : adj) {
    if (tris.size() > 2)
      throw UserError("non-manifold edge (" + std::to_string(verts[0]) + "," +
                      std::to_string(verts[1]) + ") shared by " +
                      std::to_string(tris.size()) + " triangles");
    if (tris.size() != 2) continue;  // boundary edge
    RwgEdge e;
    e.edgeIndex = basis.edgeCount() + 1;
    e.vertices = verts;
    e.plusTriangle = std::min(tris[0], tris[1]);
    e.minusTriangle = std::max(tris[0], tris[1]);
    e.length = (mesh.vertex(verts[1]) - mesh.vertex(verts[0])).norm();
    e.center = 0.5 * (mesh.vertex(verts[0]) + mesh.vertex(verts[1]));
    basis.edges.push_back(e);
  }
  // std::map iteration already yields (min,max)-sorted edges.
  return basis;
}

}  // namespace arraymom
