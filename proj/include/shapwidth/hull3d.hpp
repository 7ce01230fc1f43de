#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "shapwidth/errors.hpp"
#include "shapwidth/geometry.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

enum class HullKind { empty, point, segment, triangle, polyhedron };

struct HullFace {
    int a = -1, b = -1, c = -1;
    Point3 normal; // outward unit normal
};

struct HullEdge {
    int u = -1, v = -1;
    int f1 = -1, f2 = -1; // adjacent face indices (t1 = t2 never happens here;
                          // flat 3-point hulls are handled by HullKind::triangle)
};

struct ConvexHull3 {
    HullKind kind = HullKind::empty;
    std::vector<int> vertices;  // indices into the input
    std::vector<HullFace> faces;
    std::vector<HullEdge> edges;
};

namespace detail {

inline double tetra_volume6(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
    return dot(cross(b - a, c - a), d - a);
}

} // namespace detail

/// Incremental 3-D convex hull. Insertion order is shuffled with a fixed
/// seed; each point's visible faces are found by a full scan, which is fine
/// at oracle scale (n up to a few hundred).
inline ConvexHull3 hull3d(const std::vector<Point3>& pts) {
    ConvexHull3 hull;
    const int n = static_cast<int>(pts.size());
    if (n == 0) return hull;
    hull.kind = HullKind::point;
    hull.vertices = {0};
    if (n == 1) return hull;

    double scale = 0.0;
    for (const Point3& p : pts) {
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    }
    const double eps = kEpsGeneralPosition * std::max(scale, 1.0);

    // Greedy non-degenerate seed: farthest pair, max-area third, max-volume fourth.
    int i1 = 1;
    double best = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d = norm(pts[static_cast<std::size_t>(i)] - pts[0]);
        if (d > best) { best = d; i1 = i; }
    }
    if (best <= eps) throw DegenerateInput("hull3d: all points coincide");

    int i2 = -1;
    best = 0.0;
    for (int i = 1; i < n; ++i) {
        if (i == i1) continue;
        const double a = norm(cross(pts[static_cast<std::size_t>(i1)] - pts[0],
                                    pts[static_cast<std::size_t>(i)] - pts[0]));
        if (a > best) { best = a; i2 = i; }
    }
    const double seg_len = norm(pts[static_cast<std::size_t>(i1)] - pts[0]);
    if (i2 < 0 || best <= eps * seg_len) {
        if (n > 2) throw DegenerateInput("hull3d: more than two collinear points");
        hull.kind = HullKind::segment;
        hull.vertices = {0, i1};
        return hull;
    }

    int i3 = -1;
    best = 0.0;
    for (int i = 1; i < n; ++i) {
        if (i == i1 || i == i2) continue;
        const double v = std::abs(detail::tetra_volume6(pts[0], pts[static_cast<std::size_t>(i1)],
                                                        pts[static_cast<std::size_t>(i2)],
                                                        pts[static_cast<std::size_t>(i)]));
        if (v > best) { best = v; i3 = i; }
    }
    const double tri_area2 = norm(cross(pts[static_cast<std::size_t>(i1)] - pts[0],
                                        pts[static_cast<std::size_t>(i2)] - pts[0]));
    if (i3 < 0 || best <= eps * tri_area2) {
        if (n > 3) throw DegenerateInput("hull3d: four or more coplanar points");
        hull.kind = HullKind::triangle;
        hull.vertices = {0, i1, i2};
        return hull;
    }

    // Faces stored as oriented triples; alive flag per face.
    struct Face {
        int a, b, c;
        Point3 normal; // outward, unnormalized
        bool alive = true;
    };
    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c, const Point3& inside) {
        Face f{a, b, c, {}, true};
        f.normal = cross(pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)],
                         pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
        if (dot(f.normal, inside - pts[static_cast<std::size_t>(a)]) > 0.0) {
            std::swap(f.b, f.c);
            f.normal = f.normal * -1.0;
        }
        faces.push_back(f);
    };

    const Point3 centroid = (pts[0] + pts[static_cast<std::size_t>(i1)] +
                             pts[static_cast<std::size_t>(i2)] + pts[static_cast<std::size_t>(i3)]) *
                            0.25;
    add_face(0, i1, i2, centroid);
    add_face(0, i1, i3, centroid);
    add_face(0, i2, i3, centroid);
    add_face(i1, i2, i3, centroid);

    std::vector<int> rest;
    for (int i = 1; i < n; ++i) {
        if (i != i1 && i != i2 && i != i3) rest.push_back(i);
    }
    Rng rng(0x5eedull);
    std::shuffle(rest.begin(), rest.end(), rng);

    std::vector<char> visible;
    for (int pi : rest) {
        const Point3& p = pts[static_cast<std::size_t>(pi)];
        visible.assign(faces.size(), 0);
        bool any = false;
        for (std::size_t fi = 0; fi < faces.size(); ++fi) {
            if (!faces[fi].alive) continue;
            const double side = dot(faces[fi].normal, p - pts[static_cast<std::size_t>(faces[fi].a)]);
            const double fscale = norm(faces[fi].normal) *
                                  norm(p - pts[static_cast<std::size_t>(faces[fi].a)]);
            if (std::abs(side) <= kEpsGeneralPosition * std::max(fscale, 1e-300)) {
                throw DegenerateInput("hull3d: point " + std::to_string(pi) +
                                      " coplanar with a hull face");
            }
            if (side > 0.0) {
                visible[fi] = 1;
                any = true;
            }
        }
        if (!any) continue; // interior point

        // Horizon: directed edges of visible faces whose reverse is not visible.
        std::map<std::pair<int, int>, int> edge_count;
        for (std::size_t fi = 0; fi < faces.size(); ++fi) {
            if (!faces[fi].alive || !visible[fi]) continue;
            const int vs[3] = {faces[fi].a, faces[fi].b, faces[fi].c};
            for (int e = 0; e < 3; ++e) {
                edge_count[{vs[e], vs[(e + 1) % 3]}]++;
            }
            faces[fi].alive = false;
        }
        for (const auto& [edge, cnt] : edge_count) {
            (void)cnt;
            if (edge_count.count({edge.second, edge.first})) continue; // interior to the cap
            add_face(edge.first, edge.second, pi, centroid);
        }
    }

    hull.kind = HullKind::polyhedron;
    hull.vertices.clear();
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (const Face& f : faces) {
        if (!f.alive) continue;
        HullFace out;
        out.a = f.a;
        out.b = f.b;
        out.c = f.c;
        out.normal = normalized(f.normal);
        hull.faces.push_back(out);
        used[static_cast<std::size_t>(f.a)] = used[static_cast<std::size_t>(f.b)] =
            used[static_cast<std::size_t>(f.c)] = 1;
    }
    for (int i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) hull.vertices.push_back(i);
    }
    std::map<std::pair<int, int>, std::pair<int, int>> edge_faces;
    for (std::size_t fi = 0; fi < hull.faces.size(); ++fi) {
        const int vs[3] = {hull.faces[fi].a, hull.faces[fi].b, hull.faces[fi].c};
        for (int e = 0; e < 3; ++e) {
            int u = vs[e], v = vs[(e + 1) % 3];
            if (u > v) std::swap(u, v);
            auto [it, inserted] = edge_faces.try_emplace({u, v}, static_cast<int>(fi), -1);
            if (!inserted) {
                if (it->second.second != -1) {
                    throw std::logic_error("hull3d: edge with more than two faces");
                }
                it->second.second = static_cast<int>(fi);
            }
        }
    }
    for (const auto& [edge, fs] : edge_faces) {
        if (fs.second == -1) throw std::logic_error("hull3d: boundary edge in closed hull");
        hull.edges.push_back({edge.first, edge.second, fs.first, fs.second});
    }
    return hull;
}

/// Exterior angle of a polyhedron edge: the angle between the two adjacent
/// outward face normals over 2pi. Always in [0, 1/2] for a convex hull.
/// Flat-triangle hulls never reach this; their mean width is closed-form.
inline double exterior_angle(const ConvexHull3& hull, const HullEdge& edge) {
    if (hull.kind != HullKind::polyhedron) {
        throw std::logic_error("exterior_angle: hull has no dihedral edges");
    }
    const Point3& n1 = hull.faces[static_cast<std::size_t>(edge.f1)].normal;
    const Point3& n2 = hull.faces[static_cast<std::size_t>(edge.f2)].normal;
    const double c = std::clamp(dot(n1, n2), -1.0, 1.0);
    return std::acos(c) / kTwoPi;
}

/// Interior angle chi(e), computed from the face planes rather than the
/// normals so that psi + chi = 1/2 is a genuine cross-check.
inline double interior_angle(const ConvexHull3& hull, const HullEdge& edge,
                             const std::vector<Point3>& pts) {
    auto opposite = [&](int face) {
        const HullFace& f = hull.faces[static_cast<std::size_t>(face)];
        if (f.a != edge.u && f.a != edge.v) return f.a;
        if (f.b != edge.u && f.b != edge.v) return f.b;
        return f.c;
    };
    const Point3& pu = pts[static_cast<std::size_t>(edge.u)];
    const Point3 axis = normalized(pts[static_cast<std::size_t>(edge.v)] - pu);
    auto perp = [&](int w) {
        Point3 d = pts[static_cast<std::size_t>(w)] - pu;
        d = d - axis * dot(d, axis);
        return normalized(d);
    };
    const Point3 a = perp(opposite(edge.f1));
    const Point3 b = perp(opposite(edge.f2));
    const double c = std::clamp(dot(a, b), -1.0, 1.0);
    return std::acos(c) / kTwoPi;
}

/// Mean width M1 of the convex hull:
///   0 or 1 points -> 0;  segment -> length/2;  flat triangle -> perimeter/4;
///   polyhedron    -> (1/2) sum_e l(e) psi(e).
inline double mean_width_exact(const std::vector<Point3>& pts) {
    const ConvexHull3 hull = hull3d(pts);
    switch (hull.kind) {
        case HullKind::empty:
        case HullKind::point:
            return 0.0;
        case HullKind::segment:
            return 0.5 * norm(pts[static_cast<std::size_t>(hull.vertices[1])] -
                              pts[static_cast<std::size_t>(hull.vertices[0])]);
        case HullKind::triangle: {
            const Point3& a = pts[static_cast<std::size_t>(hull.vertices[0])];
            const Point3& b = pts[static_cast<std::size_t>(hull.vertices[1])];
            const Point3& c = pts[static_cast<std::size_t>(hull.vertices[2])];
            return 0.25 * (norm(b - a) + norm(c - b) + norm(a - c));
        }
        case HullKind::polyhedron: {
            KahanSum sum;
            for (const HullEdge& e : hull.edges) {
                const double len = norm(pts[static_cast<std::size_t>(e.v)] -
                                        pts[static_cast<std::size_t>(e.u)]);
                sum.add(len * exterior_angle(hull, e));
            }
            return 0.5 * sum.value();
        }
    }
    return 0.0;
}

inline double mean_width_exact(const PointSet& ps) { return mean_width_exact(ps.points); }

/// Width of the point set along a unit direction u.
inline double directional_width(const std::vector<Point3>& pts, const Point3& u) {
    if (pts.empty()) return 0.0;
    double lo = dot(pts[0], u), hi = lo;
    for (const Point3& p : pts) {
        const double t = dot(p, u);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return hi - lo;
}

} // namespace shapwidth
