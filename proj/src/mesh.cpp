#include "ifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ifem {

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

UniformMesh build_mesh(int m) {
    if (m < 1) throw std::invalid_argument("build_mesh: m must be >= 1");
    UniformMesh mesh;
    mesh.m = m;
    mesh.h = 1.0 / m;
    mesh.elements.reserve(2 * m * m);
    for (int i2 = 0; i2 < m; ++i2) {
        for (int i1 = 0; i1 < m; ++i1) {
            const int a = mesh.node_id(i1, i2);
            const int b = mesh.node_id(i1 + 1, i2);
            const int c = mesh.node_id(i1 + 1, i2 + 1);
            const int d = mesh.node_id(i1, i2 + 1);
            mesh.elements.push_back({a, b, d});  // below the slope -1 diagonal
            mesh.elements.push_back({b, c, d});  // above it
        }
    }
    mesh.patches.assign(mesh.node_count(), {});
    for (int e = 0; e < mesh.element_count(); ++e)
        for (int v : mesh.elements[e]) mesh.patches[v].push_back(e);
    return mesh;
}

InterfaceGeometry InterfaceGeometry::straight(double d0, double theta0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("straight interface: d0 must be > 0");
    if (!(theta0 > 0.0 && theta0 < std::atan(1.0 / d0)))
        throw std::invalid_argument("straight interface: theta0 out of (0, atan(1/d0))");
    InterfaceGeometry g;
    g.kind = Kind::Straight;
    g.d0 = d0;
    g.theta0 = theta0;
    return g;
}

InterfaceGeometry InterfaceGeometry::circle(double xc, double yc, double rc) {
    if (!(rc > 0.0)) throw std::invalid_argument("circle interface: rc must be > 0");
    InterfaceGeometry g;
    g.kind = Kind::Circle;
    g.xc = xc;
    g.yc = yc;
    g.rc = rc;
    return g;
}

double InterfaceGeometry::level_set(const Vec2& p) const {
    if (kind == Kind::Straight) {
        // Side 0 is the wedge theta < theta0 around the pole A(-d0, 1).
        return (1.0 - p.y()) - std::tan(theta0) * (p.x() + d0);
    }
    // Side 0 (negative) is the exterior of the circle, so the a0 coefficient
    // sits outside the interface for both geometries.
    const double dx = p.x() - xc, dy = p.y() - yc;
    return rc * rc - dx * dx - dy * dy;
}

double InterfaceGeometry::distance(const Vec2& p) const {
    if (kind == Kind::Straight) {
        const double t = std::tan(theta0);
        return std::abs((1.0 - p.y()) - t * (p.x() + d0)) / std::sqrt(1.0 + t * t);
    }
    const double r = std::hypot(p.x() - xc, p.y() - yc);
    return std::abs(r - rc);
}

namespace {

int64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
}

// Crossing parameters of the level set on the segment a + t (b - a), t in (0,1).
std::vector<double> edge_roots(const InterfaceGeometry& g, const Vec2& a, const Vec2& b,
                               bool& tangent_flag) {
    std::vector<double> roots;
    if (g.kind == InterfaceGeometry::Kind::Straight) {
        const double ga = g.level_set(a), gb = g.level_set(b);
        if ((ga < 0.0) != (gb < 0.0) && ga != gb) {
            const double t = ga / (ga - gb);
            if (t > 0.0 && t < 1.0) roots.push_back(t);
        }
        return roots;
    }
    const Vec2 d = b - a;
    const Vec2 ac = a - Vec2{g.xc, g.yc};
    const double A = d.squaredNorm();
    const double B = 2.0 * d.dot(ac);
    const double C = ac.squaredNorm() - g.rc * g.rc;
    const double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return roots;
    // near-tangency: the two crossings coincide to within tolerance
    if (std::sqrt(disc) / (2.0 * A) < 1e-12) {
        tangent_flag = true;
        return roots;
    }
    const double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)})
        if (t > 0.0 && t < 1.0) roots.push_back(t);
    return roots;
}

}  // namespace

CutClassification classify_elements(const UniformMesh& mesh, const InterfaceGeometry& geom) {
    CutClassification cut;
    const int nn = mesh.node_count();
    cut.points.resize(nn);
    for (int v = 0; v < nn; ++v) cut.points[v] = mesh.node(v);
    cut.node_on_interface.assign(nn, 0);
    cut.is_cut.assign(mesh.element_count(), 0);

    const double snap = 1e-12 * mesh.h;
    for (int v = 0; v < nn; ++v)
        if (geom.distance(mesh.node(v)) <= snap) cut.node_on_interface[v] = 1;

    // unique edges: horizontal, vertical and one diagonal per cell
    std::vector<std::pair<int, int>> edges;
    const int m = mesh.m;
    for (int i2 = 0; i2 <= m; ++i2)
        for (int i1 = 0; i1 < m; ++i1) edges.emplace_back(mesh.node_id(i1, i2), mesh.node_id(i1 + 1, i2));
    for (int i2 = 0; i2 < m; ++i2)
        for (int i1 = 0; i1 <= m; ++i1) edges.emplace_back(mesh.node_id(i1, i2), mesh.node_id(i1, i2 + 1));
    for (int i2 = 0; i2 < m; ++i2)
        for (int i1 = 0; i1 < m; ++i1) edges.emplace_back(mesh.node_id(i1 + 1, i2), mesh.node_id(i1, i2 + 1));

    // edge -> vertex ids of crossing points on it
    std::unordered_map<int64_t, std::vector<int>> on_edge;
    for (auto [a, b] : edges) {
        const Vec2 pa = mesh.node(a), pb = mesh.node(b);
        const double len = (pb - pa).norm();
        bool tangent = false;
        for (double t : edge_roots(geom, pa, pb, tangent)) {
            if (t * len <= snap || (1.0 - t) * len <= snap) {
                const int v = t < 0.5 ? a : b;
                cut.node_on_interface[v] = 1;
                continue;
            }
            // ignore crossings next to a snapped endpoint: the interface
            // passes through the vertex itself
            CutClassification::EdgePoint ep;
            ep.a = a;
            ep.b = b;
            ep.t = t;
            ep.vertex = static_cast<int>(cut.points.size());
            cut.points.push_back((1.0 - t) * pa + t * pb);
            cut.edge_points.push_back(ep);
            on_edge[edge_key(a, b)].push_back(ep.vertex);
        }
        if (tangent) cut.degenerate_tangency = true;
    }

    // classify elements and pick the chord of the polygonal interface
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& el = mesh.elements[e];
        // interface points per element edge (local edge k joins vertex k and k+1)
        std::array<std::vector<int>, 3> pts;
        int n_edge_pts = 0, edges_hit = 0;
        for (int k = 0; k < 3; ++k) {
            auto it = on_edge.find(edge_key(el[k], el[(k + 1) % 3]));
            if (it != on_edge.end()) {
                pts[k] = it->second;
                n_edge_pts += static_cast<int>(pts[k].size());
                ++edges_hit;
            }
        }
        std::vector<int> snapped;
        for (int v : el)
            if (cut.node_on_interface[v]) snapped.push_back(v);

        CutClassification::Chord chord;
        if (n_edge_pts == 2 && edges_hit == 2) {
            std::vector<int> two;
            for (int k = 0; k < 3; ++k)
                for (int v : pts[k]) two.push_back(v);
            chord.p = two[0];
            chord.q = two[1];
        } else if (n_edge_pts == 1 && snapped.size() == 1) {
            // interface through one vertex and the opposite edge
            int k_hit = -1;
            for (int k = 0; k < 3; ++k)
                if (!pts[k].empty()) k_hit = k;
            const int va = el[k_hit], vb = el[(k_hit + 1) % 3];
            if (snapped[0] != va && snapped[0] != vb) {
                chord.p = snapped[0];
                chord.q = pts[k_hit][0];
            }
        } else if (n_edge_pts > 2) {
            cut.degenerate_tangency = true;
        }
        // 0 or collinear points: element not cut by the polygonal interface

        if (chord.p >= 0 && chord.q >= 0) {
            cut.is_cut[e] = 1;
            cut.cut_elements.push_back(e);
            cut.chords.push_back(chord);
        }
    }

    // ordered polyline through the points of all chords
    std::vector<int> used;
    for (const auto& c : cut.chords) {
        used.push_back(c.p);
        used.push_back(c.q);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    if (geom.kind == InterfaceGeometry::Kind::Circle) {
        std::sort(used.begin(), used.end(), [&](int a, int b) {
            const Vec2 pa = cut.points[a], pb = cut.points[b];
            return std::atan2(pa.y() - geom.yc, pa.x() - geom.xc) <
                   std::atan2(pb.y() - geom.yc, pb.x() - geom.xc);
        });
        cut.closed = true;
    } else {
        const Vec2 dir{std::cos(geom.theta0), -std::sin(geom.theta0)};
        std::sort(used.begin(), used.end(), [&](int a, int b) {
            return dir.dot(cut.points[a]) < dir.dot(cut.points[b]);
        });
        cut.closed = false;
    }
    cut.polyline = std::move(used);
    return cut;
}

SubTriangulation subtriangulate(const UniformMesh& mesh, const InterfaceGeometry& geom,
                                const CutClassification& cut) {
    SubTriangulation sub;
    sub.points = cut.points;
    sub.per_element.resize(mesh.element_count());

    auto side_of = [&](const Vec2& p) { return geom.side(p); };

    int ci = 0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& el = mesh.elements[e];
        const auto vx = mesh.vertices(e);
        if (!cut.is_cut[e]) {
            SubTriangulation::SubTri t;
            t.v = el;
            t.area = triangle_area(vx[0], vx[1], vx[2]);
            t.side = side_of((vx[0] + vx[1] + vx[2]) / 3.0);
            sub.per_element[e].push_back(t);
            continue;
        }
        const auto chord = cut.chords[ci++];
        const Vec2 P = cut.points[chord.p], Q = cut.points[chord.q];
        auto line = [&](const Vec2& x) {
            return (Q.x() - P.x()) * (x.y() - P.y()) - (Q.y() - P.y()) * (x.x() - P.x());
        };

        // split the triangle along the chord into two convex polygons
        std::array<double, 3> lv;
        for (int k = 0; k < 3; ++k)
            lv[k] = (el[k] == chord.p || el[k] == chord.q) ? 0.0 : line(vx[k]);

        std::vector<int> pos, neg;
        auto push = [&](std::vector<int>& poly, int v) {
            if (poly.empty() || poly.back() != v) poly.push_back(v);
        };
        for (int k = 0; k < 3; ++k) {
            if (lv[k] >= 0.0) push(pos, el[k]);
            if (lv[k] <= 0.0) push(neg, el[k]);
            // chord endpoint interior to this edge?
            const int a = el[k], b = el[(k + 1) % 3];
            for (int cid : {chord.p, chord.q}) {
                if (cid < mesh.node_count()) continue;  // snapped to a vertex
                const auto& ep = cut.edge_points[cid - mesh.node_count()];
                if (edge_key(ep.a, ep.b) == edge_key(a, b)) {
                    push(pos, cid);
                    push(neg, cid);
                }
            }
        }

        // sign of the line function maps to interface side via any vertex
        // clearly off the interface
        int ref = -1;
        for (int k = 0; k < 3; ++k)
            if (std::abs(lv[k]) > 0.0 && !cut.node_on_interface[el[k]]) ref = k;
        const int ref_side = side_of(vx[ref]);
        const bool ref_pos = lv[ref] > 0.0;

        auto emit = [&](const std::vector<int>& poly, bool is_pos) {
            const int n = static_cast<int>(poly.size());
            for (int k = 1; k + 1 < n; ++k) {
                SubTriangulation::SubTri t;
                t.v = {poly[0], poly[k], poly[k + 1]};
                t.area = triangle_area(sub.points[t.v[0]], sub.points[t.v[1]], sub.points[t.v[2]]);
                if (t.area < 1e-14 * mesh.h * mesh.h) continue;
                t.side = (is_pos == ref_pos) ? ref_side : 1 - ref_side;
                sub.per_element[e].push_back(t);
            }
        };
        emit(pos, true);
        emit(neg, false);
    }
    return sub;
}

double mismatch_measure(const InterfaceGeometry& geom, const CutClassification& cut) {
    if (geom.kind == InterfaceGeometry::Kind::Straight) return 0.0;
    const auto& poly = cut.polyline;
    if (poly.size() < 2) return 0.0;
    double area = 0.0;
    const size_t n = poly.size();
    const size_t last = cut.closed ? n : n - 1;
    for (size_t k = 0; k < last; ++k) {
        const Vec2 a = cut.points[poly[k]] - Vec2{geom.xc, geom.yc};
        const Vec2 b = cut.points[poly[(k + 1) % n]] - Vec2{geom.xc, geom.yc};
        double phi = std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x());
        while (phi < 0.0) phi += 2.0 * M_PI;
        area += 0.5 * geom.rc * geom.rc * (phi - std::sin(phi));
    }
    return area;
}

}  // namespace ifem
