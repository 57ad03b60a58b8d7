#include "pme/geometry/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <vector>

namespace pme {

TriangleMesh loadMeshText(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MeshFormatError("cannot open mesh file: " + path);
  }
  int nv = 0, ne = 0;
  if (!(in >> nv >> ne) || nv < 3 || ne < 1) {
    throw MeshFormatError("bad mesh header in " + path);
  }
  std::vector<Vec2> pts(nv);
  std::vector<int> flags(nv);
  for (int i = 0; i < nv; ++i) {
    double x, y;
    int f;
    if (!(in >> x >> y >> f) || (f != 0 && f != 1)) {
      throw MeshFormatError("bad vertex line " + std::to_string(i) + " in " + path);
    }
    pts[i] = Vec2(x, y);
    flags[i] = f;
  }
  std::vector<std::array<int, 3>> tris(ne);
  for (int k = 0; k < ne; ++k) {
    if (!(in >> tris[k][0] >> tris[k][1] >> tris[k][2])) {
      throw MeshFormatError("bad triangle line " + std::to_string(k) + " in " + path);
    }
  }

  TriangleMesh mesh(pts, tris);

  // Validate the stored flags in the file's own numbering: a vertex is on the
  // boundary exactly when it touches an edge used by a single triangle.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : tris) {
    for (int i = 0; i < 3; ++i) {
      const auto key = std::minmax(t[i], t[(i + 1) % 3]);
      ++edge_count[{key.first, key.second}];
    }
  }
  std::vector<int> derived(nv, 0);
  for (const auto& [key, count] : edge_count) {
    if (count == 1) {
      derived[key.first] = 1;
      derived[key.second] = 1;
    }
  }
  if (derived != flags) {
    throw MeshFormatError("boundary flags disagree with connectivity in " + path);
  }
  return mesh;
}

void saveMeshText(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw MeshFormatError("cannot write mesh file: " + path);
  }
  out << std::setprecision(17);
  out << mesh.numVertices() << ' ' << mesh.numElements() << '\n';
  for (int v = 0; v < mesh.numVertices(); ++v) {
    out << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << ' '
        << (mesh.isBoundaryVertex(v) ? 1 : 0) << '\n';
  }
  for (int k = 0; k < mesh.numElements(); ++k) {
    const auto& t = mesh.tri(k);
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

void saveMeshVtk(const TriangleMesh& mesh, const std::string& path,
                 const Eigen::VectorXd* point_scalar, const std::string& scalar_name) {
  std::ofstream out(path);
  if (!out) {
    throw MeshFormatError("cannot write VTK file: " + path);
  }
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n";
  out << "pme mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.numVertices() << " double\n";
  for (int v = 0; v < mesh.numVertices(); ++v) {
    out << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << " 0\n";
  }
  out << "CELLS " << mesh.numElements() << ' ' << 4 * mesh.numElements() << '\n';
  for (int k = 0; k < mesh.numElements(); ++k) {
    const auto& t = mesh.tri(k);
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.numElements() << '\n';
  for (int k = 0; k < mesh.numElements(); ++k) out << "5\n";
  if (point_scalar != nullptr) {
    if (point_scalar->size() != mesh.numVertices()) {
      throw MeshFormatError("VTK point scalar size mismatch");
    }
    out << "POINT_DATA " << mesh.numVertices() << '\n';
    out << "SCALARS " << scalar_name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.numVertices(); ++v) out << (*point_scalar)[v] << '\n';
  }
}

}  // namespace pme
