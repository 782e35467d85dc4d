#include <doctest.h>

#include <chrono>

#include "am2/diagram.hpp"
#include "fixtures.hpp"

using namespace am2;

namespace {

double min_scan_seconds(const ModelParams& p, int n, int repeats) {
    const AxisSpec a1{OperatingAxis::S1in, 10.0 / 64.0, 10.0, n};
    const AxisSpec a2{OperatingAxis::S2in, 10.0 / 64.0, 10.0, n};
    double best = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const RegionGrid grid = scan(p, a1, a2, 1);
        const auto t1 = std::chrono::steady_clock::now();
        REQUIRE(grid.cells.size() == static_cast<std::size_t>(n) * n);
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

}  // namespace

TEST_CASE("scan wall time grows linearly in cell count") {
    const auto p = test::make_p0();
    (void)min_scan_seconds(p, 16, 1);  // warm-up
    const double t32 = min_scan_seconds(p, 32, 3);
    const double t128 = min_scan_seconds(p, 128, 3);
    const double ratio = t128 / t32;  // 16x the cells
    MESSAGE("t32 = ", t32, " s, t128 = ", t128, " s, ratio = ", ratio);
    CHECK(ratio >= 16.0 / 1.2);
    CHECK(ratio <= 16.0 * 1.2);
}
