#include <doctest.h>

#include <cmath>
#include <set>

#include "am2/diagram.hpp"
#include "am2/io.hpp"
#include "fixtures.hpp"

using namespace am2;

namespace {

CellSignature standalone_signature(const ModelParams& p) {
    CellSignature sig;
    for (const auto& ce : classify_all(p)) {
        const auto& e = ce.eq;
        if (e.marginal || e.tangency) sig.boundary = true;
        if (!e.exists) continue;
        if (e.label.branch <= 1) {
            FamilyLabel fam = e.label;
            fam.branch = 0;
            std::string entry = fam.str();
            if (e.root_count > 1) entry += "x" + std::to_string(e.root_count);
            sig.existing.push_back(entry);
        }
        if (ce.verdict) {
            if (!ce.verdict->agreement) sig.failed = true;
            if (ce.verdict->numeric == Verdict::Marginal || ce.verdict->table == Verdict::Marginal) {
                sig.boundary = true;
            }
            if (ce.verdict->numeric == Verdict::LES) sig.les.push_back(e.label.str());
            if (ce.verdict->hopf) sig.hopf = true;
        }
    }
    std::sort(sig.existing.begin(), sig.existing.end());
    std::sort(sig.les.begin(), sig.les.end());
    return sig;
}

}  // namespace

TEST_CASE("axis parsing and validation") {
    CHECK(axis_from_string("D") == OperatingAxis::D);
    CHECK(axis_from_string("S1in") == OperatingAxis::S1in);
    CHECK(axis_from_string("S2in") == OperatingAxis::S2in);
    CHECK(axis_from_string("r") == OperatingAxis::R);
    CHECK_THROWS_AS(axis_from_string("bogus"), std::invalid_argument);

    const auto p = test::make_p0();
    AxisSpec a{OperatingAxis::D, 0.1, 1.0, 4};
    CHECK_THROWS_AS(scan(p, a, a, 1), std::invalid_argument);  // distinct axes
    AxisSpec b{OperatingAxis::S1in, 0.1, 1.0, 1};
    AxisSpec c{OperatingAxis::S2in, 0.1, 1.0, 4};
    CHECK_THROWS_AS(scan(p, b, c, 1), std::invalid_argument);  // n >= 2
}

TEST_CASE("cell signatures match standalone evaluation") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.5, 6.0, 2};
    const AxisSpec a2{OperatingAxis::S2in, 0.5, 6.0, 2};
    const RegionGrid grid = scan(p, a1, a2, 1);
    REQUIRE(grid.cells.size() == 4);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const ModelParams q = cell_params(p, a1, a2, i, j);
            CHECK(grid.at(i, j).key() == standalone_signature(q).key());
        }
    }
}

TEST_CASE("washout dominates below the reactor-1 break-even") {
    const auto p = test::make_p0();  // lambda1^1 = lambda1^2 = 2/3
    const AxisSpec a1{OperatingAxis::S1in, 0.05, 0.6, 5};
    const AxisSpec a2{OperatingAxis::S2in, 0.05, 0.6, 3};  // below lambda2^21
    const RegionGrid grid = scan(p, a1, a2, 1);
    for (const auto& cell : grid.cells) {
        REQUIRE(cell.les.size() == 1);
        CHECK(cell.les[0] == "E00^00");
    }
}

TEST_CASE("scans are deterministic and thread-count independent") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.2, 8.0, 9};
    const AxisSpec a2{OperatingAxis::S2in, 0.2, 8.0, 7};
    const RegionGrid serial = scan(p, a1, a2, 1);
    const RegionGrid threaded = scan(p, a1, a2, 4);
    const std::string csv1 = io::grid_csv(serial);
    const std::string csv2 = io::grid_csv(threaded);
    CHECK(csv1 == csv2);
    const RegionGrid again = scan(p, a1, a2, 4);
    CHECK(io::grid_csv(again) == csv2);
}

TEST_CASE("2x refinement shares the coarse lattice") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.2, 8.0, 7};
    const AxisSpec a2{OperatingAxis::S2in, 0.2, 8.0, 5};
    const AxisSpec f1{OperatingAxis::S1in, 0.2, 8.0, 13};
    const AxisSpec f2{OperatingAxis::S2in, 0.2, 8.0, 9};
    const RegionGrid coarse = scan(p, a1, a2, 2);
    const RegionGrid fine = scan(p, f1, f2, 2);
    for (int j = 0; j < a2.n; ++j) {
        for (int i = 0; i < a1.n; ++i) {
            CHECK(coarse.at(i, j).key() == fine.at(2 * i, 2 * j).key());
        }
    }
}

TEST_CASE("boundary curves carry the known loci") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.1, 8.0, 17};
    const AxisSpec a2{OperatingAxis::S2in, 0.1, 8.0, 17};
    const RegionGrid grid = scan(p, a1, a2, 2);
    const auto curves = boundary_curves(grid, p);
    REQUIRE(!curves.empty());

    // the reactor-1 break-even is a vertical line at 2/3
    bool found_lambda11 = false;
    for (const auto& c : curves) {
        if (c.name != "S1in = lambda1^1") continue;
        found_lambda11 = true;
        for (const auto& [x, y] : c.points) {
            CHECK(x == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        }
    }
    CHECK(found_lambda11);

    // the biomass-1-only stability boundary is the line
    // S2in = lambda2^11 - k2/k1 (S1in - lambda1^1)
    const double lam11 = 2.0 / 3.0;
    const double lam2_low = 3.0 - std::sqrt(5.0);
    bool found_slant = false;
    for (const auto& c : curves) {
        if (c.name != "S2in = lambda2^11 - k2/k1 (S1in - lambda1^1)") continue;
        found_slant = true;
        for (const auto& [x, y] : c.points) {
            CHECK(y == doctest::Approx(lam2_low - 0.5 * (x - lam11)).epsilon(1e-10));
        }
    }
    CHECK(found_slant);

    // no analytic overlay for a (D, r) scan
    const AxisSpec d1{OperatingAxis::D, 0.1, 1.0, 4};
    const AxisSpec d2{OperatingAxis::R, 0.2, 0.8, 4};
    const RegionGrid dr = scan(p, d1, d2, 2);
    CHECK_THROWS_AS(boundary_curves(dr, p), std::invalid_argument);
}

TEST_CASE("signature changes happen near analytic boundary curves") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.1, 8.0, 33};
    const AxisSpec a2{OperatingAxis::S2in, 0.1, 8.0, 33};
    const RegionGrid grid = scan(p, a1, a2, 4);
    const auto curves = boundary_curves(grid, p);

    const double w1 = a1.step();
    const double w2 = a2.step();
    auto near_curve = [&](double x, double y) {
        for (const auto& c : curves) {
            for (const auto& [cx, cy] : c.points) {
                if (std::abs(cx - x) <= w1 && std::abs(cy - y) <= w2) return true;
            }
        }
        return false;
    };

    int transitions = 0;
    for (int j = 0; j < a2.n; ++j) {
        for (int i = 0; i + 1 < a1.n; ++i) {
            if (grid.at(i, j).key() != grid.at(i + 1, j).key()) {
                ++transitions;
                CHECK(near_curve(0.5 * (a1.value(i) + a1.value(i + 1)), a2.value(j)));
            }
        }
    }
    for (int j = 0; j + 1 < a2.n; ++j) {
        for (int i = 0; i < a1.n; ++i) {
            if (grid.at(i, j).key() != grid.at(i, j + 1).key()) {
                ++transitions;
                CHECK(near_curve(a1.value(i), 0.5 * (a2.value(j) + a2.value(j + 1))));
            }
        }
    }
    CHECK(transitions > 10);  // the window straddles several regions
}

TEST_CASE("hopf map filters flagged cells") {
    RegionGrid grid;
    grid.axis1 = {OperatingAxis::D, 0.1, 1.0, 3};
    grid.axis2 = {OperatingAxis::R, 0.2, 0.8, 2};
    grid.cells.resize(6);
    grid.cells[1].hopf = true;
    grid.cells[5].hopf = true;
    const auto cells = hopf_map(grid);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0] == std::pair<int, int>{1, 0});
    CHECK(cells[1] == std::pair<int, int>{2, 1});

    grid.cells[1].hopf = false;
    grid.cells[5].hopf = false;
    CHECK(hopf_map(grid).empty());
}

TEST_CASE("svg export is self-consistent") {
    const auto p = test::make_p0();
    const AxisSpec a1{OperatingAxis::S1in, 0.2, 6.0, 9};
    const AxisSpec a2{OperatingAxis::S2in, 0.2, 6.0, 9};
    const RegionGrid grid = scan(p, a1, a2, 2);
    const auto curves = boundary_curves(grid, p);
    const std::string svg = io::grid_svg(grid, curves);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("S1in") != std::string::npos);
    // deterministic re-render
    CHECK(svg == io::grid_svg(grid, curves));
}
