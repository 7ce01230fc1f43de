#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp> // vendored nlohmann/json

#include "shapwidth/errors.hpp"
#include "shapwidth/geometry.hpp"
#include "shapwidth/hull3d.hpp"
#include "shapwidth/result.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

/// Point file format: one point per line, three whitespace-separated decimal
/// reals. Blank lines and lines starting with '#' are ignored.
inline PointSet parse_points(std::istream& in) {
    PointSet ps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        Point3 p;
        if (!(ls >> p.x >> p.y >> p.z)) {
            throw ParseError("expected three reals", lineno);
        }
        std::string trailing;
        if (ls >> trailing) {
            throw ParseError("trailing tokens after three reals", lineno);
        }
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw ParseError("non-finite coordinate", lineno);
        }
        ps.points.push_back(p);
    }
    if (ps.points.empty()) throw EmptyInputError("no points in input");
    return ps;
}

inline PointSet parse_points(const std::string& text) {
    std::istringstream in(text);
    return parse_points(in);
}

/// 17 significant digits: enough for exact double round-trips.
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_points(std::ostream& out, const PointSet& ps) {
    for (const Point3& p : ps.points) {
        out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << '\n';
    }
}

inline void write_result_csv(std::ostream& out, const PointSet& ps, const ShapleyResult& res,
                             double mean_width) {
    out << "index,x,y,z,phi,case1,case2,case3_removal,case3_apex,case3_endpoint\n";
    double sum_phi = 0.0;
    for (int i = 0; i < res.n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const auto& b = res.parts[ii];
        out << i << ',' << format_real(ps[i].x) << ',' << format_real(ps[i].y) << ','
            << format_real(ps[i].z) << ',' << format_real(res.phi[ii]) << ','
            << format_real(b.case1) << ',' << format_real(b.case2) << ','
            << format_real(b.case3_removal) << ',' << format_real(b.case3_apex) << ','
            << format_real(b.case3_endpoint) << '\n';
        sum_phi += res.phi[ii];
    }
    out << "# sum_phi=" << format_real(sum_phi) << '\n';
    out << "# mean_width=" << format_real(mean_width) << '\n';
    if (res.seed) out << "# seed=" << *res.seed << '\n';
}

inline nlohmann::json result_to_json(const PointSet& ps, const ShapleyResult& res,
                                     double mean_width) {
    nlohmann::json points = nlohmann::json::array();
    double sum_phi = 0.0;
    for (int i = 0; i < res.n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const auto& b = res.parts[ii];
        nlohmann::json row{{"index", i},
                           {"x", ps[i].x},
                           {"y", ps[i].y},
                           {"z", ps[i].z},
                           {"phi", res.phi[ii]},
                           {"case1", b.case1},
                           {"case2", b.case2},
                           {"case3_removal", b.case3_removal},
                           {"case3_apex", b.case3_apex},
                           {"case3_endpoint", b.case3_endpoint}};
        if (!res.stderrs.empty()) row["stderr"] = res.stderrs[ii];
        points.push_back(std::move(row));
        sum_phi += res.phi[ii];
    }
    nlohmann::json out{{"algorithm", res.algorithm},
                       {"n", res.n},
                       {"points", std::move(points)},
                       {"sum_phi", sum_phi},
                       {"mean_width", mean_width}};
    if (res.seed) out["seed"] = *res.seed;
    return out;
}

enum class PointDistribution { sphere, ball, cube };

/// Seeded random instance generator. Resamples the whole set until it passes
/// the general-position check (violations are measure-zero; the loop is a
/// guard, not a workhorse).
inline PointSet generate_points(int n, PointDistribution dist, std::uint64_t seed) {
    Rng rng(seed);
    NormalSampler normal;
    for (int attempt = 0; attempt < 64; ++attempt) {
        PointSet ps;
        ps.points.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            Point3 p;
            switch (dist) {
                case PointDistribution::sphere: {
                    double n2 = 0.0;
                    do {
                        p = {normal(rng), normal(rng), normal(rng)};
                        n2 = dot(p, p);
                    } while (n2 <= 1e-30);
                    p = p * (1.0 / std::sqrt(n2));
                    break;
                }
                case PointDistribution::ball: {
                    do {
                        p = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0,
                             2.0 * uniform01(rng) - 1.0};
                    } while (dot(p, p) > 1.0);
                    break;
                }
                case PointDistribution::cube:
                    p = {uniform01(rng), uniform01(rng), uniform01(rng)};
                    break;
            }
            ps.points.push_back(p);
        }
        if (check_general_position(ps).ok()) return ps;
    }
    throw DegenerateInput("generator failed to produce a general-position set");
}

} // namespace shapwidth
