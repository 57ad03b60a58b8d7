#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pme/geometry/mesh_io.hpp"
#include "pme/sim/mesh_gen.hpp"
#include "support/fixtures.hpp"

namespace pme {
namespace {

namespace fs = std::filesystem;

class MeshIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "pme_mesh_io_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream out(p);
    out << text;
    return p.string();
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
};

TEST_F(MeshIoTest, TextRoundTripIsAFixpoint) {
  const TriangleMesh mesh = generateDiskMesh(0.5, 100);
  const std::string p1 = (dir_ / "a.txt").string();
  const std::string p2 = (dir_ / "b.txt").string();
  saveMeshText(mesh, p1);
  const TriangleMesh back = loadMeshText(p1);
  EXPECT_EQ(back.numVertices(), mesh.numVertices());
  EXPECT_EQ(back.numElements(), mesh.numElements());
  EXPECT_EQ(back.numInterior(), mesh.numInterior());
  EXPECT_NEAR(back.totalArea(), mesh.totalArea(), 1e-15);
  // Saving the reloaded mesh reproduces the file byte for byte, so the
  // canonical ordering is stable under reload.
  saveMeshText(back, p2);
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST_F(MeshIoTest, LoadRejectsMissingFile) {
  EXPECT_THROW(loadMeshText((dir_ / "nope.txt").string()), MeshFormatError);
}

TEST_F(MeshIoTest, LoadRejectsBadHeader) {
  EXPECT_THROW(loadMeshText(write("h.txt", "")), MeshFormatError);
  EXPECT_THROW(loadMeshText(write("h2.txt", "2 1\n0 0 1\n1 0 1\n")), MeshFormatError);
}

TEST_F(MeshIoTest, LoadRejectsBadVertexAndTriangleLines) {
  // Flag outside {0, 1}.
  EXPECT_THROW(
      loadMeshText(write("v.txt", "3 1\n0 0 7\n1 0 1\n0 1 1\n0 1 2\n")),
      MeshFormatError);
  // Triangle record truncated.
  EXPECT_THROW(loadMeshText(write("t.txt", "3 1\n0 0 1\n1 0 1\n0 1 1\n0 1\n")),
               MeshFormatError);
}

TEST_F(MeshIoTest, LoadRejectsInconsistentBoundaryFlags) {
  // A single triangle has all three vertices on the boundary; flagging one
  // as interior must be caught.
  EXPECT_THROW(
      loadMeshText(write("f.txt", "3 1\n0 0 0\n1 0 1\n0 1 1\n0 1 2\n")),
      MeshFormatError);
}

TEST_F(MeshIoTest, LoadAcceptsAConsistentSingleTriangle) {
  const TriangleMesh mesh =
      loadMeshText(write("ok.txt", "3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 2\n"));
  EXPECT_EQ(mesh.numVertices(), 3);
  EXPECT_EQ(mesh.numElements(), 1);
  EXPECT_EQ(mesh.numInterior(), 0);
  EXPECT_NEAR(mesh.totalArea(), 0.5, 1e-15);
}

TEST_F(MeshIoTest, VtkContainsTheExpectedSections) {
  const TriangleMesh mesh = testing::makeCrossSquare();
  const std::string bare = (dir_ / "bare.vtk").string();
  saveMeshVtk(mesh, bare, nullptr, "");
  const std::string text = slurp(bare);
  EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(text.find("POINTS 5 double"), std::string::npos);
  EXPECT_NE(text.find("CELLS 4 16"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 4"), std::string::npos);
  EXPECT_EQ(text.find("POINT_DATA"), std::string::npos);

  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
  const std::string with = (dir_ / "field.vtk").string();
  saveMeshVtk(mesh, with, &v, "v");
  const std::string text2 = slurp(with);
  EXPECT_NE(text2.find("POINT_DATA 5"), std::string::npos);
  EXPECT_NE(text2.find("SCALARS v double 1"), std::string::npos);

  Eigen::VectorXd wrong = Eigen::VectorXd::Zero(4);
  EXPECT_THROW(saveMeshVtk(mesh, (dir_ / "bad.vtk").string(), &wrong, "v"),
               MeshFormatError);
}

}  // namespace
}  // namespace pme
