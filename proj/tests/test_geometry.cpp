#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <shapwidth/geometry.hpp>
#include <shapwidth/io.hpp>
#include <shapwidth/util.hpp>

using namespace shapwidth;

namespace {

double dist_to_line(const Point3& p, const Point3& q, const Point3& r) {
    const Point3 d = normalized(r - q);
    const Point3 w = p - q;
    const Point3 perp = w - d * dot(w, d);
    return norm(perp);
}

} // namespace

TEST_CASE("project_along: axis-aligned examples") {
    PointSet ps({{0, 0, 0}, {0, 0, 1}, {1, 0, 0.3}, {0, 2, -1}});
    const auto proj = project_along(ps, 0, 1);
    REQUIRE(proj.size() == 2);
    // (1,0,0.3) -> planar (1,0), theta 0
    CHECK(proj[0].source == 2);
    CHECK(proj[0].radius() == Catch::Approx(1.0).margin(1e-12));
    CHECK(proj[0].theta == Catch::Approx(0.0).margin(1e-12));
    // (0,2,-1) -> planar distance 2, theta pi/2 relative to the first point
    CHECK(proj[1].radius() == Catch::Approx(2.0).margin(1e-12));
    CHECK(proj[1].theta == Catch::Approx(kPi / 2.0).margin(1e-12));
}

TEST_CASE("project_along: planar norm equals distance to the line qr") {
    const PointSet ps = generate_points(24, PointDistribution::ball, 2024);
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const int q = static_cast<int>(rng() % 24);
        int r = static_cast<int>(rng() % 24);
        if (r == q) r = (r + 1) % 24;
        for (const auto& pp : project_along(ps, q, r)) {
            const double want = dist_to_line(ps[pp.source], ps[q], ps[r]);
            CHECK(pp.radius() == Catch::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("project_along: degenerate axis") {
    PointSet ps({{0, 0, 0}, {0, 0, 0}, {1, 1, 1}});
    CHECK_THROWS_AS(project_along(ps, 0, 1), DegenerateInput);
}

TEST_CASE("polar_order: sorts ascending and lifts cyclically") {
    std::vector<ProjectedPoint> pts;
    for (double t : {3.1, 0.2, 1.5}) {
        ProjectedPoint p;
        p.source = static_cast<int>(pts.size());
        p.a = std::cos(t);
        p.b = std::sin(t);
        p.theta = t;
        pts.push_back(p);
    }
    const PolarSweepOrder order = polar_order(pts);
    CHECK(order.theta(0) == Catch::Approx(0.2));
    CHECK(order.theta(1) == Catch::Approx(1.5));
    CHECK(order.theta(2) == Catch::Approx(3.1));
    const int m = order.size();
    CHECK(order.lifted_theta(m) == Catch::Approx(0.2 + kTwoPi));
    for (int i = 0; i + 1 < 2 * m; ++i) {
        CHECK(order.lifted_theta(i + 1) > order.lifted_theta(i));
    }
}

TEST_CASE("polar_order: tied angles violate general position") {
    std::vector<ProjectedPoint> pts(2);
    pts[0] = {0, 1.0, 0.0, 0.0};
    pts[1] = {1, 2.0, 0.0, 0.0}; // same direction, different radius
    CHECK_THROWS_AS(polar_order(pts), DegenerateInput);
}

TEST_CASE("classify_side: quarter-turn examples and antisymmetry") {
    std::vector<ProjectedPoint> pts(3);
    pts[0] = {0, 1.0, 0.0, 0.0};
    pts[1] = {1, 0.0, 1.0, kPi / 2.0};
    pts[2] = {2, 0.0, -2.0, 3.0 * kPi / 2.0};
    const PolarSweepOrder order = polar_order(pts);
    // order: theta 0, pi/2, 3pi/2
    CHECK(classify_side(order, 0, 1) == Side::Left);
    CHECK(classify_side(order, 0, 2) == Side::Right);

    const PointSet ps = generate_points(16, PointDistribution::sphere, 7);
    const PolarSweepOrder big = polar_order(project_along(ps, 0, 1));
    for (int i = 0; i < big.size(); ++i) {
        for (int j = 0; j < big.size(); ++j) {
            if (i == j) continue;
            const Side a = classify_side(big, i, j);
            const Side b = classify_side(big, j, i);
            CHECK(a != b);
        }
    }
}

TEST_CASE("check_general_position: accepts a tetrahedron") {
    PointSet ps({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(check_general_position(ps).ok());
}

TEST_CASE("check_general_position: flags collinear triples") {
    PointSet ps({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 3}});
    const auto report = check_general_position(ps);
    REQUIRE_FALSE(report.ok());
    CHECK(report.kind == GeneralPositionReport::Kind::collinear_triple);
    CHECK(report.indices[0] == 0);
    CHECK(report.indices[1] == 1);
    CHECK(report.indices[2] == 2);
}

TEST_CASE("check_general_position: flags coplanar quadruples") {
    PointSet ps({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.3, 0.4, 2.0}});
    const auto report = check_general_position(ps);
    REQUIRE_FALSE(report.ok());
    CHECK(report.kind == GeneralPositionReport::Kind::coplanar_quadruple);
}

TEST_CASE("frame: orthonormal within tolerance") {
    const PointSet ps = generate_points(10, PointDistribution::ball, 31);
    for (int q = 0; q < 4; ++q) {
        for (int r = q + 1; r < 5; ++r) {
            const auto f = ProjectionFrame::along(ps[q], ps[r]);
            CHECK(std::abs(dot(f.u, f.v)) <= 1e-12);
            CHECK(std::abs(dot(f.u, f.dir)) <= 1e-12);
            CHECK(std::abs(dot(f.v, f.dir)) <= 1e-12);
            CHECK(norm(f.u) == Catch::Approx(1.0).margin(1e-12));
            CHECK(norm(f.v) == Catch::Approx(1.0).margin(1e-12));
        }
    }
}
