#pragma once

#include <string>
#include <utility>
#include <vector>

#include "am2/stability.hpp"

namespace am2 {

enum class OperatingAxis { D, S1in, S2in, R };
const char* to_string(OperatingAxis a) noexcept;
OperatingAxis axis_from_string(const std::string& s);

/// Inclusive sample lattice along one operating parameter: n points from
/// lo to hi, so a 2x refinement (2n-1 points) shares every coarse node.
struct AxisSpec {
    OperatingAxis axis = OperatingAxis::S1in;
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double value(int idx) const { return lo + (hi - lo) * idx / (n - 1); }
    double step() const { return (hi - lo) / (n - 1); }
};

/// Qualitative content of one grid cell: which families exist (with their
/// branch counts) and which are locally stable (per branch).
struct CellSignature {
    std::vector<std::string> existing;  // sorted, e.g. "E01^11x3"
    std::vector<std::string> les;       // sorted branch labels, e.g. "E01^11#3"
    bool hopf = false;
    bool boundary = false;  // marginal existence/verdict or tangency in the cell
    bool failed = false;    // numerical failure or verdict disagreement
    std::string error;

    std::string key() const;  // canonical form for comparisons
};

struct RegionGrid {
    AxisSpec axis1, axis2;
    std::vector<CellSignature> cells;  // row-major: index j * axis1.n + i

    const CellSignature& at(int i, int j) const {
        return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(axis1.n) +
                     static_cast<std::size_t>(i)];
    }
};

/// Enumerates and classifies every cell of the lattice. Cells are
/// independent; with threads > 1 they are processed concurrently and the
/// result is identical to the serial scan. Cell-level failures are
/// recorded in the signature, never thrown.
RegionGrid scan(const ModelParams& base, const AxisSpec& a1, const AxisSpec& a2, int threads = 1);

/// Builds the parameters of one cell.
ModelParams cell_params(const ModelParams& base, const AxisSpec& a1, const AxisSpec& a2,
                        int i, int j);

struct BoundaryCurve {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (axis1, axis2) coordinates
};

/// Closed-form loci where the existence/stability conditions change,
/// rendered as polylines in grid coordinates. At least one axis must be a
/// feed concentration; throws std::invalid_argument otherwise.
std::vector<BoundaryCurve> boundary_curves(const RegionGrid& grid, const ModelParams& base);

/// Cells whose signature carries a Hopf candidate, as (i, j) indices.
std::vector<std::pair<int, int>> hopf_map(const RegionGrid& grid);

}  // namespace am2
