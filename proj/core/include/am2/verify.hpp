#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "am2/model.hpp"

namespace am2 {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string details;
};

struct VerifyRun {
    std::uint64_t seed = 0;
    int draws = 0;
    std::vector<PropertyResult> properties;

    bool all_pass() const noexcept {
        for (const auto& p : properties) {
            if (!p.pass) return false;
        }
        return true;
    }
};

/// Randomized property suite over operating-parameter draws around `base`:
/// equilibrium residuals, the finite-difference Jacobian check, the dense
/// eigenvalue oracle, the scalar-root lemmas, verdict agreement, and the
/// trajectory invariant monitors. Zero draws yields a vacuous pass with a
/// warning in the details.
VerifyRun run_verification(const ModelParams& base, std::uint64_t seed, int draws);

std::string verify_report_json(const VerifyRun& run);

}  // namespace am2
