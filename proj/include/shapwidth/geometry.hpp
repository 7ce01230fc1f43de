#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shapwidth/errors.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline Point3 normalized(const Point3& a) {
    double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

/// The player set N. General position (no 3 collinear, no 4 coplanar) is a
/// precondition of the sweep algorithm, validated by check_general_position.
struct PointSet {
    std::vector<Point3> points;

    PointSet() = default;
    explicit PointSet(std::vector<Point3> pts) : points(std::move(pts)) {}
    int size() const { return static_cast<int>(points.size()); }
    const Point3& operator[](int i) const { return points[static_cast<std::size_t>(i)]; }
};

/// Relative tolerance for all general-position predicates.
constexpr double kEpsGeneralPosition = 1e-9;

/// Orthonormal frame of the plane orthogonal to the line qr. u is chosen
/// deterministically from the coordinate axis least aligned with the
/// direction, v completes a right-handed (u, v, dir) triple.
struct ProjectionFrame {
    Point3 origin; // q
    Point3 dir;    // (r-q)/|r-q|
    Point3 u, v;

    static ProjectionFrame along(const Point3& q, const Point3& r) {
        const Point3 d = r - q;
        const double len = norm(d);
        const double scale = std::max({std::abs(q.x), std::abs(q.y), std::abs(q.z),
                                       std::abs(r.x), std::abs(r.y), std::abs(r.z), 1.0});
        if (len <= kEpsGeneralPosition * scale) {
            throw DegenerateInput("projection axis below length tolerance");
        }
        ProjectionFrame f;
        f.origin = q;
        f.dir = {d.x / len, d.y / len, d.z / len};
        const std::array<Point3, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        int best = 0;
        double best_dot = std::abs(f.dir.x);
        if (std::abs(f.dir.y) < best_dot) { best = 1; best_dot = std::abs(f.dir.y); }
        if (std::abs(f.dir.z) < best_dot) { best = 2; }
        f.u = normalized(cross(f.dir, axes[static_cast<std::size_t>(best)]));
        f.v = cross(f.dir, f.u);
        return f;
    }

    /// Planar coordinates of a point in the frame; the line qr maps to (0,0).
    std::pair<double, double> project(const Point3& p) const {
        const Point3 w = p - origin;
        return {dot(w, u), dot(w, v)};
    }
};

struct ProjectedPoint {
    int source = -1; // index into the originating PointSet
    double a = 0.0, b = 0.0;
    double theta = 0.0; // atan2(b, a) normalized to [0, 2pi)

    double radius() const { return std::hypot(a, b); }
};

/// Projects every point except q and r onto the plane orthogonal to r-q.
/// Planar distance from the origin equals the 3-D distance to the line qr.
inline std::vector<ProjectedPoint> project_along(const PointSet& points, int q, int r) {
    if (q == r) throw DegenerateInput("project_along requires q != r");
    const ProjectionFrame frame = ProjectionFrame::along(points[q], points[r]);
    std::vector<ProjectedPoint> out;
    out.reserve(static_cast<std::size_t>(std::max(0, points.size() - 2)));
    for (int i = 0; i < points.size(); ++i) {
        if (i == q || i == r) continue;
        auto [a, b] = frame.project(points[i]);
        ProjectedPoint pp;
        pp.source = i;
        pp.a = a;
        pp.b = b;
        const double local = norm(points[i] - points[q]);
        if (std::hypot(a, b) <= kEpsGeneralPosition * local) {
            throw DegenerateInput("point " + std::to_string(i) +
                                  " projects onto the line qr (collinear triple)");
        }
        double t = std::atan2(b, a);
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        pp.theta = t;
        out.push_back(pp);
    }
    return out;
}

/// Projected points sorted by polar angle, with cyclic lifting: index i+m
/// refers to the same point as i at angle theta+2pi.
class PolarSweepOrder {
public:
    explicit PolarSweepOrder(std::vector<ProjectedPoint> pts) : pts_(std::move(pts)) {
        std::sort(pts_.begin(), pts_.end(),
                  [](const ProjectedPoint& x, const ProjectedPoint& y) { return x.theta < y.theta; });
        const int m = size();
        for (int i = 0; i < m; ++i) {
            const int j = (i + 1) % m;
            const double gap = (j == 0) ? pts_[0].theta + kTwoPi - pts_[static_cast<std::size_t>(i)].theta
                                        : pts_[static_cast<std::size_t>(j)].theta - pts_[static_cast<std::size_t>(i)].theta;
            if (m > 1 && gap <= kEpsGeneralPosition) {
                throw DegenerateInput("tied polar angles between projected points " +
                                      std::to_string(pts_[static_cast<std::size_t>(i)].source) + " and " +
                                      std::to_string(pts_[static_cast<std::size_t>(j)].source));
            }
        }
    }

    int size() const { return static_cast<int>(pts_.size()); }

    const ProjectedPoint& point(int i) const { return pts_[static_cast<std::size_t>(index(i))]; }
    int source(int i) const { return point(i).source; }
    double theta(int i) const { return point(i).theta; }

    /// Lifted angle: theta(i mod m) + 2pi * floor(i / m), defined for i >= 0.
    double lifted_theta(int i) const {
        const int m = size();
        return pts_[static_cast<std::size_t>(i % m)].theta + kTwoPi * static_cast<double>(i / m);
    }

    int index(int i) const {
        const int m = size();
        return ((i % m) + m) % m;
    }

private:
    std::vector<ProjectedPoint> pts_;
};

inline PolarSweepOrder polar_order(std::vector<ProjectedPoint> projected) {
    return PolarSweepOrder(std::move(projected));
}

enum class Side { Left, Right };

/// Side of p_j relative to the ray through p_i: Left iff the planar cross
/// product is positive. Vanishing cross product is a general-position
/// violation (p_i, p_j collinear with the projected origin).
inline Side classify_side(const PolarSweepOrder& order, int i, int j) {
    const ProjectedPoint& pi = order.point(i);
    const ProjectedPoint& pj = order.point(j);
    const double c = pi.a * pj.b - pi.b * pj.a;
    if (std::abs(c) <= kEpsGeneralPosition * pi.radius() * pj.radius()) {
        throw DegenerateInput("projected points " + std::to_string(pi.source) + " and " +
                              std::to_string(pj.source) + " are collinear with the origin");
    }
    return c > 0.0 ? Side::Left : Side::Right;
}

struct GeneralPositionReport {
    enum class Kind { ok, collinear_triple, coplanar_quadruple };
    Kind kind = Kind::ok;
    std::array<int, 4> indices{-1, -1, -1, -1};

    bool ok() const { return kind == Kind::ok; }
    std::string describe() const {
        switch (kind) {
            case Kind::ok: return "ok";
            case Kind::collinear_triple:
                return "collinear triple (" + std::to_string(indices[0]) + ", " +
                       std::to_string(indices[1]) + ", " + std::to_string(indices[2]) + ")";
            default:
                return "coplanar quadruple (" + std::to_string(indices[0]) + ", " +
                       std::to_string(indices[1]) + ", " + std::to_string(indices[2]) + ", " +
                       std::to_string(indices[3]) + ")";
        }
    }
};

/// Scans for the first collinear triple or coplanar quadruple. Predicates are
/// scale-free: cross norms and orientation determinants are compared against
/// eps times the product of the edge lengths involved.
inline GeneralPositionReport check_general_position(const PointSet& points,
                                                    double eps = kEpsGeneralPosition) {
    const int n = points.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point3 dij = points[j] - points[i];
            const double lij = norm(dij);
            if (lij <= eps * std::max(1.0, norm(points[i]))) {
                return {GeneralPositionReport::Kind::collinear_triple, {i, j, j, -1}};
            }
            for (int k = j + 1; k < n; ++k) {
                const Point3 dik = points[k] - points[i];
                if (norm(cross(dij, dik)) <= eps * lij * norm(dik)) {
                    return {GeneralPositionReport::Kind::collinear_triple, {i, j, k, -1}};
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point3 dij = points[j] - points[i];
            const double lij = norm(dij);
            for (int k = j + 1; k < n; ++k) {
                const Point3 dik = points[k] - points[i];
                const double lik = norm(dik);
                const Point3 cr = cross(dij, dik);
                for (int l = k + 1; l < n; ++l) {
                    const Point3 dil = points[l] - points[i];
                    if (std::abs(dot(cr, dil)) <= eps * lij * lik * norm(dil)) {
                        return {GeneralPositionReport::Kind::coplanar_quadruple, {i, j, k, l}};
                    }
                }
            }
        }
    }
    return {};
}

} // namespace shapwidth
