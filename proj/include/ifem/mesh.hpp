#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace ifem {

using Vec2 = Eigen::Vector2d;

/// Uniform triangulation of the unit square: m x m cells, each split by the
/// diagonal from (i1+1,i2) to (i1,i2+1), so the mesh contains lines of slope -1.
struct UniformMesh {
    int m = 0;
    double h = 0.0;

    int node_count() const { return (m + 1) * (m + 1); }
    int element_count() const { return 2 * m * m; }

    int node_id(int i1, int i2) const { return i2 * (m + 1) + i1; }
    Vec2 node(int id) const {
        return {h * (id % (m + 1)), h * (id / (m + 1))};
    }

    // elements[e] = vertex node ids, counterclockwise
    std::vector<std::array<int, 3>> elements;
    // patches[node] = incident element ids
    std::vector<std::vector<int>> patches;

    std::array<Vec2, 3> vertices(int e) const {
        return {node(elements[e][0]), node(elements[e][1]), node(elements[e][2])};
    }
};

UniformMesh build_mesh(int m);

/// Straight line through A(-d0, 1) with slope -tan(theta0), or a circle of
/// center (xc, yc) and radius rc.  The zero set splits the square into
/// side 0 (level set < 0) and side 1 (level set > 0).
struct InterfaceGeometry {
    enum class Kind { Straight, Circle };
    Kind kind;

    // Straight
    double d0 = 0.0;
    double theta0 = 0.0;

    // Circle
    double xc = 0.0, yc = 0.0, rc = 0.0;

    static InterfaceGeometry straight(double d0, double theta0);
    static InterfaceGeometry circle(double xc, double yc, double rc);

    double level_set(const Vec2& p) const;
    /// Exact Euclidean distance to the interface.
    double distance(const Vec2& p) const;
    int side(const Vec2& p) const { return level_set(p) < 0.0 ? 0 : 1; }
};

struct CutClassification {
    std::vector<int> cut_elements;           // sorted element ids
    std::vector<char> is_cut;                // per element

    // Extra vertices appended after the mesh nodes.  Each lies on a mesh
    // edge where the level set changes sign (or is a snapped mesh node).
    std::vector<Vec2> points;                // global vertex table: nodes then extras
    struct EdgePoint {
        int a = -1, b = -1;                  // mesh edge endpoints (node ids)
        double t = 0.0;                      // point = (1-t) a + t b
        int vertex = -1;                     // id in `points`
    };
    std::vector<EdgePoint> edge_points;

    // Chord of the polygonal interface inside each cut element, as global
    // vertex ids (mesh node id if the interface was snapped to a vertex).
    struct Chord { int p = -1, q = -1; };
    std::vector<Chord> chords;               // indexed like cut_elements

    // Ordered polyline through the intersection points (counterclockwise
    // around the center for circles, along the line for straight cuts).
    std::vector<int> polyline;               // global vertex ids
    bool closed = false;                     // polyline wraps around (circle)

    bool degenerate_tangency = false;        // tangency treated as non-crossing
    std::vector<char> node_on_interface;     // snapped nodes
};

CutClassification classify_elements(const UniformMesh& mesh, const InterfaceGeometry& geom);

struct SubTriangulation {
    // Shares the vertex table of the classification.
    std::vector<Vec2> points;

    struct SubTri {
        std::array<int, 3> v;                // global vertex ids
        int side = 0;                        // sign of the level set (0 where negative)
        double area = 0.0;
    };
    // per element: one SubTri for uncut elements, 2..4 for cut ones
    std::vector<std::vector<SubTri>> per_element;
};

SubTriangulation subtriangulate(const UniformMesh& mesh, const InterfaceGeometry& geom,
                                const CutClassification& cut);

/// Area of the sliver between a circular interface and its inscribed polygon,
/// summed analytically over circular segments.  Zero for straight interfaces.
double mismatch_measure(const InterfaceGeometry& geom, const CutClassification& cut);

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace ifem
