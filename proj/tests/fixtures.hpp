#pragma once

// Shared parameter fixtures. P0 is the hand-checkable reference point used
// across the suites; P1 produces three f2 = g2 roots in the E01^11 family;
// P2 produces three roots in the always-unstable E02^01 family.

#include "am2/model.hpp"

namespace am2::test {

inline ModelParams make_p0() {
    return ModelParams(2.0, 1.0, 1.0, 0.5, 0.4, 0.5, 3.0, 2.0,
                       GrowthLaw::monod(1.0, 1.0), GrowthLaw::haldane(1.0, 1.0, 4.0));
}

// alpha*D1 = 0.49 (lambda1^1 = 49), alpha*D2 = 0.3: a steep hyperbolic g2
// cuts the unimodal f2 three times for the E01 upper state.
inline ModelParams make_p1() {
    const double r = 30.0 / 79.0;
    const double D = 29.4 / 79.0;
    return ModelParams(2.0, 1.0, 1.0, 0.5, D, r, 30.0, 1.7,
                       GrowthLaw::monod(0.5, 1.0), GrowthLaw::haldane(1.0, 1.0, 4.0));
}

// alpha*D1 = 0.1, alpha*D2 = 0.3 with a feed just above lambda2^12: three
// roots in E02^01, all unstable through the upper block.
inline ModelParams make_p2() {
    return ModelParams(2.0, 1.0, 1.0, 0.5, 0.15, 0.75, 0.05, 36.2,
                       GrowthLaw::monod(1.0, 1.0), GrowthLaw::haldane(1.0, 1.0, 4.0));
}

}  // namespace am2::test
