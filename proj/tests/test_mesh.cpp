#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "stokesfem/mesh.hpp"

using namespace stokesfem;

TEST(StructuredMesh, SingleCellCountsAndEuler) {
    const Mesh m = structured_unit_square(1);
    EXPECT_EQ(m.num_vertices(), 4);
    EXPECT_EQ(m.num_edges(), 5);
    EXPECT_EQ(m.num_triangles(), 2);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
}

TEST(StructuredMesh, CountsFollowTheConstruction) {
    for (int n : {2, 3, 10}) {
        const Mesh m = structured_unit_square(n);
        EXPECT_EQ(m.num_triangles(), 2 * n * n);
        EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
        EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
    }
}

TEST(StructuredMesh, NominalAndMaxEdgeLength) {
    const Mesh m = structured_unit_square(10);
    EXPECT_DOUBLE_EQ(m.nominal_h, 0.1);
    const MeshStats s = mesh_statistics(m);
    EXPECT_NEAR(s.h_max, std::sqrt(2.0) / 10.0, 1e-15);
    EXPECT_NEAR(s.h_min, 0.1, 1e-15);
}

TEST(StructuredMesh, UniformSplitAreas) {
    const Mesh m = structured_unit_square(2);
    for (int t = 0; t < m.num_triangles(); ++t) EXPECT_NEAR(m.triangle_area(t), 0.125, 1e-15);
}

TEST(StructuredMesh, AreasSumToOne) {
    for (int n : {1, 3, 7}) {
        const Mesh m = structured_unit_square(n);
        double total = 0.0;
        for (int t = 0; t < m.num_triangles(); ++t) total += m.triangle_area(t);
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(StructuredMesh, InteriorEdgesTraversedOppositely) {
    const Mesh m = structured_unit_square(4);
    // Collect directed edges of every CCW triangle; an interior edge must show
    // up once per direction.
    std::multiset<std::pair<int, int>> directed;
    for (const auto& tri : m.triangles)
        for (int i = 0; i < 3; ++i) directed.insert({tri[i], tri[(i + 1) % 3]});
    for (const MeshEdge& e : m.edges) {
        const auto fwd = directed.count({e.v0, e.v1});
        const auto bwd = directed.count({e.v1, e.v0});
        if (e.on_boundary()) {
            EXPECT_EQ(fwd + bwd, 1u);
        } else {
            EXPECT_EQ(fwd, 1u);
            EXPECT_EQ(bwd, 1u);
        }
    }
}

TEST(StructuredMesh, BoundaryEdgesHaveBoundaryVertices) {
    const Mesh m = structured_unit_square(5);
    int boundary_edges = 0;
    for (const MeshEdge& e : m.edges) {
        if (!e.on_boundary()) continue;
        ++boundary_edges;
        EXPECT_TRUE(m.vertex_on_boundary[e.v0]);
        EXPECT_TRUE(m.vertex_on_boundary[e.v1]);
    }
    EXPECT_EQ(boundary_edges, 4 * 5);
}

TEST(StructuredMesh, RejectsNonPositiveSize) {
    EXPECT_THROW(structured_unit_square(0), std::invalid_argument);
}

TEST(GradedMesh, GradingOneIsIdentity) {
    const Mesh a = structured_unit_square(6);
    const Mesh b = graded_unit_square(6, {0.5, 0.5}, 1.0);
    ASSERT_EQ(a.num_vertices(), b.num_vertices());
    for (int v = 0; v < a.num_vertices(); ++v) {
        EXPECT_DOUBLE_EQ(a.vertices[v].x, b.vertices[v].x);
        EXPECT_DOUBLE_EQ(a.vertices[v].y, b.vertices[v].y);
    }
}

TEST(GradedMesh, RefinesTowardCenter) {
    const MeshStats uniform = mesh_statistics(structured_unit_square(8));
    const MeshStats graded = mesh_statistics(graded_unit_square(8, {0.5, 0.5}, 2.0));
    EXPECT_LT(graded.h_min, uniform.h_min);
    EXPECT_GT(graded.min_area, 0.0);
}

TEST(GradedMesh, ConnectivityUnchanged) {
    const Mesh m = graded_unit_square(8, {0.5, 0.5}, 2.0);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
    double total = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) total += m.triangle_area(t);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(GradedMesh, BoundaryVerticesFixed) {
    const Mesh a = structured_unit_square(8);
    const Mesh b = graded_unit_square(8, {0.3, 0.7}, 3.0);
    for (int v = 0; v < a.num_vertices(); ++v) {
        if (!a.vertex_on_boundary[v]) continue;
        EXPECT_DOUBLE_EQ(a.vertices[v].x, b.vertices[v].x);
        EXPECT_DOUBLE_EQ(a.vertices[v].y, b.vertices[v].y);
    }
}

TEST(GradedMesh, RejectsBadParameters) {
    EXPECT_THROW(graded_unit_square(4, {1.5, 0.5}, 2.0), std::invalid_argument);
    EXPECT_THROW(graded_unit_square(4, {0.5, 0.5}, 0.5), std::invalid_argument);
}

TEST(MeshValidation, ReportsInvertedTriangle) {
    Mesh m = structured_unit_square(2);
    std::swap(m.triangles[3][0], m.triangles[3][1]); // flip orientation
    try {
        validate_mesh(m);
        FAIL() << "expected validation failure";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("triangle 3"), std::string::npos);
    }
}

TEST(MeshStatsAndDump, RoundTripHeader) {
    const Mesh m = structured_unit_square(3);
    const MeshStats s = mesh_statistics(m);
    EXPECT_EQ(s.vertices, 16);
    EXPECT_EQ(s.triangles, 18);
    std::ostringstream out;
    dump_mesh(m, out);
    std::istringstream in(out.str());
    int v = 0, e = 0, t = 0;
    in >> v >> e >> t;
    EXPECT_EQ(v, s.vertices);
    EXPECT_EQ(e, s.edges);
    EXPECT_EQ(t, s.triangles);
}

TEST(MeshOrientation, DiagonalChoicesBothValid) {
    const Mesh right = structured_unit_square(3, Diagonal::Right);
    const Mesh left = structured_unit_square(3, Diagonal::Left);
    EXPECT_EQ(right.num_triangles(), left.num_triangles());
    for (int t = 0; t < left.num_triangles(); ++t) EXPECT_GT(left.triangle_area(t), 0.0);
}
