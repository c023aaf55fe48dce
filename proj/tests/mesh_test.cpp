#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "femlite/mesh.hpp"
#include "femlite/mesh_io.hpp"
#include "test_util.hpp"

using namespace femlite;

namespace {

Mesh reference_triangle() {
    return make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 1, 2});
}

Mesh reference_tet() {
    return make_mesh(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 1, 2, 3});
}

} // namespace

TEST(Mesh, MinimalTriangle) {
    const Mesh mesh = reference_triangle();
    EXPECT_EQ(mesh.dim(), 2);
    EXPECT_EQ(mesh.num_nodes(), 3);
    EXPECT_EQ(mesh.num_elems(), 1);
    EXPECT_DOUBLE_EQ(signed_measure(mesh, 0), 0.5);
}

TEST(Mesh, ClockwiseTriangleRejected) {
    try {
        make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 2, 1});
        FAIL() << "expected NonPositiveVolume";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::non_positive_volume);
        EXPECT_NE(std::string(e.what()).find("element 0"), std::string::npos);
    }
}

TEST(Mesh, ReferenceTetVolume) {
    const Mesh mesh = reference_tet();
    EXPECT_NEAR(signed_measure(mesh, 0), 1.0 / 6.0, 1e-16);
}

TEST(Mesh, VertexIndexOutOfRange) {
    try {
        make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 1, 3});
        FAIL() << "expected IndexOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::index_out_of_range);
    }
}

TEST(Mesh, FlagShapeAndValueChecks) {
    EXPECT_THROW(make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 1, 2}, {0, 1}), Error);
    try {
        make_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 1, 2}, {0, 1, 4});
        FAIL() << "expected InvalidFlagValue";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_flag_value);
    }
}

TEST(Mesh, MeasureScalesWithH) {
    const Mesh base = reference_triangle();
    const Mesh scaled = make_mesh(2, {0, 0, 2, 0, 0, 2}, {0, 1, 2});
    EXPECT_DOUBLE_EQ(signed_measure(scaled, 0), 4.0 * signed_measure(base, 0));
}

TEST(FixOrientation, RepairsAndPermutesFlags) {
    const Mesh mesh =
        fix_orientation(2, {0, 0, 1, 0, 0, 1}, {0, 2, 1}, {1, 2, 0});
    EXPECT_GT(signed_measure(mesh, 0), 0.0);
    // swapped vertices are the last two locals; their flags swap with them
    EXPECT_EQ(mesh.elem(0)[0], 0);
    EXPECT_EQ(mesh.elem(0)[1], 1);
    EXPECT_EQ(mesh.elem(0)[2], 2);
    EXPECT_EQ(mesh.flag(0, 0), 1);
    EXPECT_EQ(mesh.flag(0, 1), 0);
    EXPECT_EQ(mesh.flag(0, 2), 2);
}

TEST(FixOrientation, IdempotentOnValidMesh) {
    const Mesh mesh = generate_mesh(MeshShape::unit_square, 3);
    const Mesh fixed = fix_orientation(2, mesh.nodes(), mesh.elems(), mesh.bd_flags());
    EXPECT_EQ(fixed.elems(), mesh.elems());
    EXPECT_EQ(fixed.bd_flags(), mesh.bd_flags());
}

TEST(FixOrientation, BadIndicesRejectedBeforeGeometry) {
    try {
        fix_orientation(2, {0, 0, 1, 0, 0, 1}, {0, 1, 9});
        FAIL() << "expected IndexOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::index_out_of_range);
    }
}

TEST(FixOrientation, DegenerateElementRejected) {
    try {
        fix_orientation(2, {0, 0, 1, 1, 2, 2}, {0, 1, 2});
        FAIL() << "expected DegenerateElement";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::degenerate_element);
    }
}

TEST(BoundaryFaces, TwoTriangleSquareHasFourBoundaryEdges) {
    Mesh mesh = generate_mesh(MeshShape::unit_square, 1);
    mesh = set_boundary_flags(mesh, [](const Point&) { return 1; });
    const FaceList faces = boundary_faces(mesh, 1);
    EXPECT_EQ(faces.size(), 4u);
    EXPECT_EQ(femtest::bruteforce_boundary_face_count(mesh), 4u);
    // every extracted face occurs in its parent's face set exactly once
    for (std::size_t r = 0; r < faces.size(); ++r) {
        const index_t* fv = faces.face(r);
        const index_t* ev = mesh.elem(faces.parent_elem[r]);
        const int lf = faces.local_face[r];
        EXPECT_EQ(fv[0], ev[kTriFaces[lf][0]]);
        EXPECT_EQ(fv[1], ev[kTriFaces[lf][1]]);
    }
}

TEST(BoundaryFaces, ExtractionOrderIsFaceMajor) {
    // all first local faces over all elements, then all second ones, ...
    Mesh mesh = generate_mesh(MeshShape::unit_square, 1);
    mesh = set_boundary_flags(mesh, [](const Point&) { return 1; });
    const FaceList faces = boundary_faces(mesh, 1);
    ASSERT_EQ(faces.size(), 4u);
    const index_t expected[4][2] = {{1, 3}, {3, 2}, {2, 0}, {0, 1}};
    const int expected_local[4] = {0, 0, 1, 2};
    for (int r = 0; r < 4; ++r) {
        EXPECT_EQ(faces.face(r)[0], expected[r][0]) << "row " << r;
        EXPECT_EQ(faces.face(r)[1], expected[r][1]) << "row " << r;
        EXPECT_EQ(faces.local_face[r], expected_local[r]) << "row " << r;
    }
}

TEST(BoundaryFaces, NoMatchesGivesEmptyList) {
    const Mesh mesh = generate_mesh(MeshShape::unit_square, 2);
    EXPECT_EQ(boundary_faces(mesh, 1).size(), 0u);
}

TEST(BoundaryFaces, TetFaceVertexOrderIsFixed) {
    const Mesh mesh =
        make_mesh(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 1, 2, 3}, {1, 1, 1, 1});
    const FaceList faces = boundary_faces(mesh, 1);
    ASSERT_EQ(faces.size(), 4u);
    // first row is the face opposite vertex 1: one-based (2, 4, 3)
    EXPECT_EQ(faces.face(0)[0], 1);
    EXPECT_EQ(faces.face(0)[1], 3);
    EXPECT_EQ(faces.face(0)[2], 2);
}

TEST(BoundaryFaces, BadFlagValueRejected) {
    const Mesh mesh = generate_mesh(MeshShape::unit_square, 1);
    EXPECT_THROW(boundary_faces(mesh, 0), Error);
    EXPECT_THROW(boundary_faces(mesh, 4), Error);
}

TEST(SetBoundaryFlags, StructuredSquareCounts) {
    const int n = 4;
    Mesh mesh = generate_mesh(MeshShape::unit_square, n);
    mesh = set_boundary_flags(mesh, [](const Point&) { return 1; });
    EXPECT_EQ(boundary_faces(mesh, 1).size(), std::size_t(4 * n));
    EXPECT_EQ(femtest::bruteforce_boundary_face_count(mesh), std::size_t(4 * n));
}

TEST(SetBoundaryFlags, GeometricPredicateSplitsSides) {
    const int n = 4;
    Mesh mesh = generate_mesh(MeshShape::unit_square, n);
    mesh = set_boundary_flags(
        mesh, [](const Point& p) { return std::abs(p[1]) < 1e-10 ? 2 : 1; });
    EXPECT_EQ(boundary_faces(mesh, 2).size(), std::size_t(n));
    EXPECT_EQ(boundary_faces(mesh, 1).size(), std::size_t(3 * n));
}

TEST(SetBoundaryFlags, SingleTriangleAllFacesFlagged) {
    Mesh mesh = set_boundary_flags(reference_triangle(), [](const Point&) { return 2; });
    EXPECT_EQ(boundary_faces(mesh, 2).size(), 3u);
}

TEST(SetBoundaryFlags, ClassifierFlagValidated) {
    EXPECT_THROW(set_boundary_flags(reference_triangle(), [](const Point&) { return 7; }),
                 Error);
}

TEST(SetBoundaryFlags, AgreesWithBruteForceOnGeneratedMeshes) {
    const Mesh meshes[] = {generate_mesh(MeshShape::unit_square, 5),
                           generate_mesh(MeshShape::lshape, 3),
                           generate_mesh(MeshShape::unit_cube, 2)};
    for (const Mesh& mesh : meshes) {
        const Mesh flagged = set_boundary_flags(mesh, [](const Point&) { return 1; });
        EXPECT_EQ(boundary_faces(flagged, 1).size(),
                  femtest::bruteforce_boundary_face_count(mesh));
    }
}

TEST(Generate, UnitSquareCounts) {
    const Mesh mesh = generate_mesh(MeshShape::unit_square, 1);
    EXPECT_EQ(mesh.num_nodes(), 4);
    EXPECT_EQ(mesh.num_elems(), 2);
    const Mesh big = generate_mesh(MeshShape::unit_square, 7);
    EXPECT_EQ(big.num_nodes(), 64);
    EXPECT_EQ(big.num_elems(), 98);
}

TEST(Generate, UnitCubeCounts) {
    const Mesh mesh = generate_mesh(MeshShape::unit_cube, 1);
    EXPECT_EQ(mesh.num_nodes(), 8);
    EXPECT_EQ(mesh.num_elems(), 6);
    const Mesh big = generate_mesh(MeshShape::unit_cube, 3);
    EXPECT_EQ(big.num_nodes(), 64);
    EXPECT_EQ(big.num_elems(), 162);
}

TEST(Generate, DomainMeasures) {
    struct Case {
        MeshShape shape;
        int n;
        double measure;
    } cases[] = {{MeshShape::unit_square, 6, 1.0},
                 {MeshShape::unit_cube, 3, 1.0},
                 {MeshShape::lshape, 4, 3.0}};
    for (const Case& c : cases) {
        const Mesh mesh = generate_mesh(c.shape, c.n);
        double total = 0.0;
        for (index_t t = 0; t < mesh.num_elems(); ++t) total += signed_measure(mesh, t);
        EXPECT_NEAR(total, c.measure, 1e-12 * c.measure);
    }
}

TEST(Generate, LshapeCounts) {
    const int n = 4;
    const Mesh mesh = generate_mesh(MeshShape::lshape, n);
    EXPECT_EQ(mesh.num_elems(), 6 * n * n);
}

TEST(Generate, ElementToNodeRatioApproachesTwo) {
    const Mesh mesh = generate_mesh(MeshShape::unit_square, 64);
    EXPECT_EQ(mesh.num_nodes(), 4225);
    EXPECT_EQ(mesh.num_elems(), 8192);
    const double ratio = double(mesh.num_elems()) / double(mesh.num_nodes());
    EXPECT_GE(ratio, 1.85);
    EXPECT_LE(ratio, 2.0);
}

TEST(Generate, RejectsNonPositiveSubdivision) {
    EXPECT_THROW(generate_mesh(MeshShape::unit_square, 0), Error);
}

TEST(MeshIo, RoundTripIsLossless) {
    Mesh mesh = generate_mesh(MeshShape::unit_square, 2);
    mesh = set_boundary_flags(
        mesh, [](const Point& p) { return std::abs(p[1]) < 1e-10 ? 2 : 1; });
    std::stringstream buffer;
    write_mesh(mesh, buffer);
    const Mesh back = read_mesh(buffer);
    EXPECT_EQ(back.dim(), mesh.dim());
    EXPECT_EQ(back.nodes(), mesh.nodes());
    EXPECT_EQ(back.elems(), mesh.elems());
    EXPECT_EQ(back.bd_flags(), mesh.bd_flags());
}

TEST(MeshIo, WriterGoldenBytes) {
    Mesh mesh = generate_mesh(MeshShape::unit_square, 1);
    mesh = set_boundary_flags(mesh, [](const Point&) { return 1; });
    std::stringstream out;
    write_mesh(mesh, out);
    const std::string expected = "2 4 2\n"
                                 "0 0\n"
                                 "1 0\n"
                                 "0 1\n"
                                 "1 1\n"
                                 "1 2 4\n"
                                 "1 4 3\n"
                                 "1 0 1\n"
                                 "1 1 0\n";
    EXPECT_EQ(out.str(), expected);
}

TEST(MeshIo, OneBasedZeroIndexIsParseError) {
    std::stringstream in("2 3 1\n0 0\n1 0\n0 1\n0 2 3\n");
    try {
        read_mesh(in);
        FAIL() << "expected ParseError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
    }
}

TEST(MeshIo, MissingFlagSectionDefaultsToZero) {
    std::stringstream in("# comment\n2 3 1\n0 0\n1 0\n0 1\n1 2 3\n");
    const Mesh mesh = read_mesh(in);
    EXPECT_EQ(mesh.flag(0, 0), 0);
    EXPECT_EQ(mesh.flag(0, 2), 0);
}

TEST(MeshIo, InlineCommentsAndBlankLines) {
    std::stringstream in("2 3 1   # header\n"
                         "\n"
                         "0 0     # first node\n"
                         "1 0\n"
                         "0 1\n"
                         "1 2 3   # the only element\n");
    const Mesh mesh = read_mesh(in);
    EXPECT_EQ(mesh.num_nodes(), 3);
    EXPECT_EQ(mesh.num_elems(), 1);
}

TEST(MeshIo, TrailingContentIsParseError) {
    std::stringstream in("2 3 1\n0 0\n1 0\n0 1\n1 2 3\n0 0 0\n1 2 3\n");
    try {
        read_mesh(in);
        FAIL() << "expected ParseError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
        EXPECT_NE(std::string(e.what()).find("trailing"), std::string::npos);
    }
}

TEST(MeshIo, MissingFileIsIoError) {
    try {
        read_mesh(std::string("definitely-not-here.txt"));
        FAIL() << "expected IoError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io_error);
    }
}
