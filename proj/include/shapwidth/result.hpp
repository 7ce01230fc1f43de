#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shapwidth {

/// Signed per-point decomposition of phi. The parts sum to phi; the removal
/// part carries Case 3's minus sign, so it is typically negative.
struct ShapleyBreakdown {
    double case1 = 0.0;
    double case2 = 0.0;
    double case3_removal = 0.0;
    double case3_apex = 0.0;
    double case3_endpoint = 0.0;

    double total() const { return case1 + case2 + case3_removal + case3_apex + case3_endpoint; }
};

struct ShapleyResult {
    int n = 0;
    std::string algorithm; // "fast", "exact", "mc"
    std::optional<std::uint64_t> seed;
    std::vector<double> phi;
    std::vector<ShapleyBreakdown> parts;
    std::vector<double> stderrs; // per-point standard errors (mc only)
};

} // namespace shapwidth
