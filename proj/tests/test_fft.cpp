#include <catch2/catch_amalgamated.hpp>

#include <shapwidth/fft.hpp>
#include <shapwidth/util.hpp>

#include "support/oracles.hpp"

using namespace shapwidth;

TEST_CASE("convolve: hand-multiplied example") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0};
    const auto c = convolve(a, b);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == Catch::Approx(3.0));
    CHECK(c[1] == Catch::Approx(10.0));
    CHECK(c[2] == Catch::Approx(8.0));
}

TEST_CASE("convolve: identity kernel") {
    const std::vector<double> a{0.5, -1.25, 3.0, 7.5};
    const auto c = convolve(a, std::vector<double>{1.0});
    REQUIRE(c.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(c[i] == Catch::Approx(a[i]));
}

TEST_CASE("convolve: random inputs match direct convolution") {
    Rng rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t na = 64 + rng() % 64;
        const std::size_t nb = 64 + rng() % 64;
        std::vector<double> a(na), b(nb);
        for (auto& x : a) x = 2.0 * uniform01(rng) - 1.0;
        for (auto& x : b) x = 2.0 * uniform01(rng) - 1.0;
        const auto fast = convolve(a, b);
        const auto direct = swtest::convolve_direct(a, b);
        REQUIRE(fast.size() == direct.size());
        double scale = 1.0;
        for (double x : direct) scale = std::max(scale, std::abs(x));
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(std::abs(fast[i] - direct[i]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("convolve: forced FFT path matches direct") {
    Rng rng(7);
    std::vector<double> a(300), b(257);
    for (auto& x : a) x = 2.0 * uniform01(rng) - 1.0;
    for (auto& x : b) x = 2.0 * uniform01(rng) - 1.0;
    Convolver cv;
    std::vector<double> fast;
    cv.linear(a, b, fast, 0); // threshold 0: always FFT
    const auto direct = swtest::convolve_direct(a, b);
    REQUIRE(fast.size() == direct.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(std::abs(fast[i] - direct[i]) <= 1e-10 * 300.0);
    }
}
