#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <shapwidth/hull3d.hpp>
#include <shapwidth/io.hpp>
#include <shapwidth/oracle.hpp>

using namespace shapwidth;

namespace {

const std::vector<Point3> kUnitTetrahedron{
    {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

std::vector<Point3> unit_tetrahedron() {
    // Edge length normalized to 1.
    std::vector<Point3> pts = kUnitTetrahedron;
    const double edge = norm(pts[0] - pts[1]);
    for (auto& p : pts) p = p * (1.0 / edge);
    return pts;
}

double tetra_mean_width() { return 3.0 * std::acos(-1.0 / 3.0) / kTwoPi; }

} // namespace

TEST_CASE("hull3d: tetrahedron has 4 faces, 6 edges, Euler relation") {
    const auto hull = hull3d(unit_tetrahedron());
    REQUIRE(hull.kind == HullKind::polyhedron);
    CHECK(hull.vertices.size() == 4);
    CHECK(hull.faces.size() == 4);
    CHECK(hull.edges.size() == 6);
    CHECK(static_cast<int>(hull.vertices.size()) - static_cast<int>(hull.edges.size()) +
              static_cast<int>(hull.faces.size()) ==
          2);
}

TEST_CASE("hull3d: two points form a segment") {
    const auto hull = hull3d({{0, 0, 0}, {1, 2, 3}});
    CHECK(hull.kind == HullKind::segment);
}

TEST_CASE("hull3d: interior point is not a vertex") {
    std::vector<Point3> pts = unit_tetrahedron();
    Point3 centroid{0, 0, 0};
    for (const auto& p : pts) centroid = centroid + p * 0.25;
    pts.push_back(centroid);
    const auto hull = hull3d(pts);
    REQUIRE(hull.kind == HullKind::polyhedron);
    CHECK(hull.vertices.size() == 4);
    CHECK(std::find(hull.vertices.begin(), hull.vertices.end(), 4) == hull.vertices.end());
}

TEST_CASE("hull3d: outward half-space property and Euler relation on random sets") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const PointSet ps = generate_points(40, PointDistribution::ball, seed);
        const auto hull = hull3d(ps.points);
        REQUIRE(hull.kind == HullKind::polyhedron);
        CHECK(static_cast<int>(hull.vertices.size()) - static_cast<int>(hull.edges.size()) +
                  static_cast<int>(hull.faces.size()) ==
              2);
        for (const auto& f : hull.faces) {
            const Point3& a = ps.points[static_cast<std::size_t>(f.a)];
            for (const auto& p : ps.points) {
                CHECK(dot(f.normal, p - a) <= 1e-9);
            }
        }
    }
}

TEST_CASE("exterior_angle: regular tetrahedron edge") {
    const auto pts = unit_tetrahedron();
    const auto hull = hull3d(pts);
    const double want = std::acos(-1.0 / 3.0) / kTwoPi; // ~0.304087
    for (const auto& e : hull.edges) {
        CHECK(exterior_angle(hull, e) == Catch::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("exterior_angle: psi + chi == 1/2 via independent dihedral computation") {
    const PointSet ps = generate_points(30, PointDistribution::sphere, 5);
    const auto hull = hull3d(ps.points);
    REQUIRE(hull.kind == HullKind::polyhedron);
    for (const auto& e : hull.edges) {
        const double psi = exterior_angle(hull, e);
        const double chi = interior_angle(hull, e, ps.points);
        CHECK(psi >= 0.0);
        CHECK(psi <= 0.5);
        CHECK(psi + chi == Catch::Approx(0.5).margin(1e-9));
    }
}

TEST_CASE("mean_width_exact: closed forms") {
    //

    // Segment of length 2 -> 1.
    CHECK(mean_width_exact({{0, 0, 0}, {0, 0, 2}}) == Catch::Approx(1.0).margin(1e-12));
    // Unit equilateral triangle -> perimeter/4 = 3/4.
    const double h = std::sqrt(3.0) / 2.0;
    CHECK(mean_width_exact({{0, 0, 0}, {1, 0, 0}, {0.5, h, 0}}) ==
          Catch::Approx(0.75).margin(1e-12));
    // Unit regular tetrahedron -> 3 acos(-1/3) / (2 pi).
    CHECK(mean_width_exact(unit_tetrahedron()) ==
          Catch::Approx(tetra_mean_width()).margin(1e-12));
    // Single point and empty set.
    CHECK(mean_width_exact(std::vector<Point3>{{1, 2, 3}}) == 0.0);
    CHECK(mean_width_exact(std::vector<Point3>{}) == 0.0);
}

TEST_CASE("mean_width_exact: rejects four coplanar points") {
    CHECK_THROWS_AS(mean_width_exact({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}),
                    DegenerateInput);
}

TEST_CASE("mean_width_exact: monotone under point insertion") {
    Rng rng(808);
    PointSet ps = generate_points(12, PointDistribution::ball, 808);
    std::vector<Point3> pts;
    double prev = 0.0;
    for (const auto& p : ps.points) {
        pts.push_back(p);
        const double cur = mean_width_exact(pts);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("directional_width: axis width of the unit cube") {
    std::vector<Point3> cube;
    for (int i = 0; i < 8; ++i) {
        cube.push_back({static_cast<double>(i & 1), static_cast<double>((i >> 1) & 1),
                        static_cast<double>((i >> 2) & 1)});
    }
    CHECK(directional_width(cube, {0, 0, 1}) == Catch::Approx(1.0));
    CHECK(directional_width({{1, 2, 3}}, {0, 1, 0}) == 0.0);
}

TEST_CASE("mc_mean_width: agrees with the edge formula within 3 sigma") {
    const auto est = mc_mean_width(unit_tetrahedron(), 200000, 7);
    CHECK(std::abs(est.value - tetra_mean_width()) <= 3.0 * est.stderr_);
    // Segment sanity: E|cos| = 1/2 over the sphere.
    const auto seg = mc_mean_width({{0, 0, 0}, {0, 0, 2}}, 200000, 8);
    CHECK(std::abs(seg.value - 1.0) <= 3.0 * seg.stderr_);
}

TEST_CASE("perm_probability: counting identities") {
    CHECK(perm_probability(1, 0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(perm_probability(2, 1) == Catch::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(perm_probability(0, 0) == Catch::Approx(1.0).epsilon(1e-15));
    // For a fixed m-set split into A before x and B after x, the rank
    // distribution sums to one: sum_k C(m,k) * k! (m-k)! / (m+1)! = 1.
    for (int m = 0; m <= 6; ++m) {
        double total = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= m; ++k) {
            total += binom * perm_probability(k, m - k);
            binom = binom * (m - k) / (k + 1.0);
        }
        CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact_shapley: closed-form instances") {
    // n = 2 at distance 1: phi = 1/4 each.
    {
        const auto res = exact_shapley(PointSet({{0, 0, 0}, {1, 0, 0}}));
        CHECK(res.phi[0] == Catch::Approx(0.25).margin(1e-12));
        CHECK(res.phi[1] == Catch::Approx(0.25).margin(1e-12));
    }
    // Unit equilateral triangle: phi = 1/4 each (= M1/3).
    {
        const double h = std::sqrt(3.0) / 2.0;
        const auto res = exact_shapley(PointSet({{0, 0, 0}, {1, 0, 0}, {0.5, h, 0}}));
        for (double phi : res.phi) CHECK(phi == Catch::Approx(0.25).margin(1e-12));
        // Matches the case1+case2 closed form: 1/6 + 1/12.
        CHECK(res.parts[0].case1 == Catch::Approx(1.0 / 6.0).margin(1e-12));
        CHECK(res.parts[0].case2 == Catch::Approx(1.0 / 12.0).margin(1e-12));
    }
    // Unit regular tetrahedron: four equal values summing to M1.
    {
        const auto res = exact_shapley(PointSet(unit_tetrahedron()));
        const double want = tetra_mean_width() / 4.0;
        for (double phi : res.phi) CHECK(phi == Catch::Approx(want).margin(1e-12));
    }
}

TEST_CASE("exact_shapley: breakdown parts sum to phi") {
    const PointSet ps = generate_points(7, PointDistribution::sphere, 4242);
    const auto res = exact_shapley(ps);
    for (int p = 0; p < res.n; ++p) {
        CHECK(res.parts[static_cast<std::size_t>(p)].total() ==
              Catch::Approx(res.phi[static_cast<std::size_t>(p)]).margin(1e-12));
    }
    // Efficiency: sum phi = mean width of the full hull.
    const double total = std::accumulate(res.phi.begin(), res.phi.end(), 0.0);
    CHECK(total == Catch::Approx(mean_width_exact(ps)).epsilon(1e-10));
}

TEST_CASE("exact_shapley: matches a literal permutation loop at n = 5") {
    const PointSet ps = generate_points(5, PointDistribution::ball, 99);
    const auto res = exact_shapley(ps);
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> phi(5, 0.0);
    double count = 0.0;
    do {
        std::vector<Point3> prefix;
        double prev = 0.0;
        for (int p : perm) {
            prefix.push_back(ps[p]);
            const double cur = mean_width_exact(prefix);
            phi[static_cast<std::size_t>(p)] += cur - prev;
            prev = cur;
        }
        count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int p = 0; p < 5; ++p) {
        CHECK(phi[static_cast<std::size_t>(p)] / count ==
              Catch::Approx(res.phi[static_cast<std::size_t>(p)]).margin(1e-12));
    }
}

TEST_CASE("exact_shapley: size limit") {
    const PointSet ps = generate_points(10, PointDistribution::sphere, 1);
    CHECK_THROWS_AS(exact_shapley(ps), SizeLimitError);
}

TEST_CASE("mc_shapley: statistical agreement and determinism") {
    const PointSet tetra(unit_tetrahedron());
    const auto exact = exact_shapley(tetra);
    const auto est = mc_shapley(tetra, 4000, 123);
    for (int p = 0; p < 4; ++p) {
        const auto ip = static_cast<std::size_t>(p);
        CHECK(std::abs(est.phi[ip] - exact.phi[ip]) <= 3.0 * est.stderrs[ip] + 1e-12);
    }
    const auto rerun = mc_shapley(tetra, 4000, 123);
    for (int p = 0; p < 4; ++p) {
        CHECK(est.phi[static_cast<std::size_t>(p)] == rerun.phi[static_cast<std::size_t>(p)]);
    }
}

TEST_CASE("mc_shapley: one sample telescopes to the full mean width") {
    const PointSet ps = generate_points(6, PointDistribution::ball, 55);
    const auto est = mc_shapley(ps, 1, 987);
    const double total = std::accumulate(est.phi.begin(), est.phi.end(), 0.0);
    CHECK(total == Catch::Approx(mean_width_exact(ps)).margin(1e-12));
}
