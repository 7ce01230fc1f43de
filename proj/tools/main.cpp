// Batch front end: Shapley values for mean width, mean-width utilities,
// instance generation, self-verification and benchmarks.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <shapwidth/shapwidth.hpp>

namespace {

using namespace shapwidth;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;     // usage, I/O, parse, size limits
constexpr int kExitDegenerate = 2;

PointSet load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return parse_points(in);
}

void require_general_position(const PointSet& ps) {
    const auto report = check_general_position(ps);
    if (!report.ok()) {
        throw DegenerateInput("input violates general position: " + report.describe());
    }
}

std::uint64_t seed_or_random(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << payload;
}

int cmd_shapley(const std::string& input, const std::string& algo, std::uint64_t samples,
                std::optional<std::uint64_t> seed, int threads, const std::string& format,
                const std::string& out_path) {
    const PointSet ps = load_points(input);
    require_general_position(ps);
    ShapleyResult res;
    if (algo == "fast") {
        ShapleyOptions opts;
        opts.threads = threads;
        res = shapley_mean_width(ps, opts);
    } else if (algo == "exact") {
        res = exact_shapley(ps);
    } else {
        res = mc_shapley(ps, samples, seed_or_random(seed));
    }
    const double mw = mean_width_exact(ps);
    std::ostringstream buf;
    if (format == "json") {
        buf << result_to_json(ps, res, mw).dump(2) << '\n';
    } else {
        write_result_csv(buf, ps, res, mw);
    }
    write_output(out_path, buf.str());
    return kExitOk;
}

int cmd_meanwidth(const std::string& input, const std::string& method, std::uint64_t samples,
                  std::optional<std::uint64_t> seed) {
    const PointSet ps = load_points(input);
    if (method == "edges") {
        std::cout << format_real(mean_width_exact(ps)) << '\n';
    } else {
        const std::uint64_t s = seed_or_random(seed);
        const auto est = mc_mean_width(ps.points, samples, s);
        std::cout << format_real(est.value) << ' ' << format_real(est.stderr_) << '\n';
        std::cout << "# seed=" << s << " samples=" << samples << '\n';
    }
    return kExitOk;
}

int cmd_gen(int n, const std::string& dist, std::uint64_t seed, const std::string& out_path) {
    PointDistribution d = PointDistribution::sphere;
    if (dist == "ball") d = PointDistribution::ball;
    if (dist == "cube") d = PointDistribution::cube;
    const PointSet ps = generate_points(n, d, seed);
    std::ostringstream buf;
    buf << "# n=" << n << " dist=" << dist << " seed=" << seed << '\n';
    write_points(buf, ps);
    write_output(out_path, buf.str());
    return kExitOk;
}

struct SelftestRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

int cmd_selftest(int trials, double tol_scale, std::uint64_t seed) {
    std::vector<SelftestRow> rows;
    const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        rows.push_back({name, pass, detail});
    };

    // Fast algorithm vs the exact permutation oracle, n = 4..8.
    {
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const int n = 4 + t % 5;
            const PointSet ps =
                generate_points(n, PointDistribution::sphere, seed + 1000 + static_cast<std::uint64_t>(t));
            const auto fast = shapley_mean_width(ps);
            const auto exact = exact_shapley(ps);
            for (int p = 0; p < n; ++p) {
                const auto ip = static_cast<std::size_t>(p);
                worst = std::max(worst, std::abs(fast.phi[ip] - exact.phi[ip]) /
                                            std::max(1e-12, std::abs(exact.phi[ip])));
            }
        }
        add("fast-vs-exact(n=4..8)", worst <= 1e-9 * tol_scale,
            "max rel err " + format_real(worst));
    }

    // Dynamic convolution differential test.
    {
        const std::uint64_t salt = seed ^ 0x5bd1e995u;
        KernelFn kernel{[salt](std::int64_t x) {
            if (x < -40 || x > 40) return 0.0;
            std::uint64_t z = static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ull + salt;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            return static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;
        }};
        DynConvState fast(kernel);
        NaiveDynConv naive(kernel);
        Rng rng(seed + 7);
        double worst = 0.0;
        for (int step = 0; step < 200000; ++step) {
            const auto roll = rng() % 100;
            if (roll < 30) {
                const double x = 2.0 * uniform01(rng) - 1.0;
                fast.update(x);
                naive.update(x);
            } else if (roll < 60) {
                const int dir = (roll & 1) ? +1 : -1;
                fast.move(dir);
                naive.move(dir);
            } else if (roll < 85) {
                const int dir = (roll & 1) ? +1 : -1;
                fast.rotate(dir);
                naive.rotate(dir);
            } else {
                const double got = fast.query();
                const double want = naive.query();
                worst = std::max(worst,
                                 std::abs(got - want) / std::max(1.0, std::abs(want)));
            }
        }
        fast.check_invariants(true);
        add("dynconv-differential(2e5 ops)", worst <= 1e-9 * tol_scale,
            "max rel err " + format_real(worst));
    }

    // Efficiency axiom at n = 30.
    {
        const PointSet ps = generate_points(30, PointDistribution::sphere, seed + 99);
        const auto res = shapley_mean_width(ps);
        const double total = std::accumulate(res.phi.begin(), res.phi.end(), 0.0);
        const double want = mean_width_exact(ps);
        const double rel = std::abs(total - want) / want;
        add("efficiency(n=30)", rel <= 1e-8 * tol_scale, "rel err " + format_real(rel));
    }

    // Closed forms.
    {
        std::vector<Point3> tetra{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
        const double edge = norm(tetra[0] - tetra[1]);
        for (auto& p : tetra) p = p * (1.0 / edge);
        const double mw = mean_width_exact(tetra);
        const double want = 3.0 * std::acos(-1.0 / 3.0) / kTwoPi;
        const auto res = shapley_mean_width(PointSet(tetra));
        double worst = std::abs(mw - want);
        for (double phi : res.phi) worst = std::max(worst, std::abs(phi - want / 4.0));
        add("closed-forms(tetrahedron)", worst <= 1e-12 * tol_scale,
            "max abs err " + format_real(worst));
    }

    std::size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.name.size());
    bool all = true;
    for (const auto& row : rows) {
        all = all && row.pass;
        std::cout << row.name << std::string(width + 2 - row.name.size(), ' ')
                  << (row.pass ? "PASS" : "FAIL") << "  " << row.detail << '\n';
    }
    std::cout << (all ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
    return all ? kExitOk : kExitError;
}

int cmd_bench(const std::string& out_path, int threads) {
    std::ostringstream buf;
    buf << "section,size,seconds,transform_samples,c_fit,checksum\n";
    const auto now = [] { return std::chrono::steady_clock::now(); };

    for (int k = 14; k <= 20; ++k) {
        const std::uint64_t n = std::uint64_t{1} << k;
        KernelFn kernel{[](std::int64_t x) {
            return (x >= -32 && x <= 32) ? 1.0 / (1.0 + static_cast<double>(x * x)) : 0.0;
        }};
        DynConvState dc(kernel);
        Rng rng(1234 + static_cast<std::uint64_t>(k));
        double checksum = 0.0;
        const auto t0 = now();
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto roll = rng() % 10;
            if (roll < 3) dc.update(2.0 * uniform01(rng) - 1.0);
            else if (roll < 5) dc.move(+1);
            else if (roll < 7) dc.move(-1);
            else if (roll < 8) dc.rotate(+1);
            else if (roll < 9) dc.rotate(-1);
            else checksum += dc.query();
        }
        const double secs = std::chrono::duration<double>(now() - t0).count();
        const double log2n = static_cast<double>(k);
        const double cfit = static_cast<double>(dc.stats().transform_samples) /
                            (static_cast<double>(n) * log2n * log2n);
        buf << "dynconv," << n << ',' << format_real(secs) << ','
            << dc.stats().transform_samples << ',' << format_real(cfit) << ','
            << format_real(checksum) << '\n';
    }

    for (int n : {50, 100, 150}) {
        const PointSet ps =
            generate_points(n, PointDistribution::sphere, 4242 + static_cast<std::uint64_t>(n));
        ShapleyOptions opts;
        opts.threads = threads;
        const auto t0 = now();
        const auto res = shapley_mean_width(ps, opts);
        const double secs = std::chrono::duration<double>(now() - t0).count();
        const double checksum = std::accumulate(res.phi.begin(), res.phi.end(), 0.0);
        buf << "shapley," << n << ',' << format_real(secs) << ",0,0," << format_real(checksum)
            << '\n';
    }

    write_output(out_path, buf.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shapley values for the mean width of 3-D convex hulls"};
    app.require_subcommand(1);

    std::string input, out_path, format = "csv";
    std::string algo = "fast", method = "edges", dist = "sphere";
    std::uint64_t samples = 10000;
    std::optional<std::uint64_t> seed;
    std::uint64_t gen_seed = 0;
    int n = 0, threads = 1, trials = 20;
    double tol_scale = 1.0;

    auto* shap = app.add_subcommand("shapley", "per-point Shapley values of the mean width");
    shap->add_option("input", input, "point file")->required();
    shap->add_option("--algo", algo)->check(CLI::IsMember({"fast", "exact", "mc"}));
    shap->add_option("--samples", samples);
    shap->add_option("--seed", seed);
    shap->add_option("--threads", threads)->check(CLI::PositiveNumber);
    shap->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    shap->add_option("--out", out_path);

    auto* mw = app.add_subcommand("meanwidth", "mean width of the convex hull");
    mw->add_option("input", input, "point file")->required();
    mw->add_option("--method", method)->check(CLI::IsMember({"edges", "mc"}));
    mw->add_option("--samples", samples);
    mw->add_option("--seed", seed);

    auto* gen = app.add_subcommand("gen", "generate a random general-position instance");
    gen->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    gen->add_option("--dist", dist)->check(CLI::IsMember({"sphere", "ball", "cube"}));
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--out", out_path);

    auto* self = app.add_subcommand("selftest", "run the built-in verification suites");
    self->add_option("--trials", trials);
    self->add_option("--seed", seed);
    self->add_option("--tolerance-scale", tol_scale,
                     "scales pass thresholds (0 forces failure; harness sanity check)");

    auto* bench = app.add_subcommand("bench", "dynconv and end-to-end scaling table");
    bench->add_option("--out", out_path);
    bench->add_option("--threads", threads)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (shap->parsed()) {
            return cmd_shapley(input, algo, samples, seed, threads, format, out_path);
        }
        if (mw->parsed()) {
            return cmd_meanwidth(input, method, samples, seed);
        }
        if (gen->parsed()) {
            return cmd_gen(n, dist, gen_seed, out_path);
        }
        if (self->parsed()) {
            if (trials <= 0) {
                std::cerr << "selftest: --trials must be positive\n";
                return kExitError;
            }
            return cmd_selftest(trials, tol_scale, seed.value_or(20260801));
        }
        if (bench->parsed()) {
            return cmd_bench(out_path, threads);
        }
    } catch (const DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
