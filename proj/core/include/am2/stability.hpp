#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "am2/equilibria.hpp"

namespace am2 {

/// Trace, determinant and eigenvalue pair of one 2x2 diagonal block.
struct BlockSummary {
    double tr = 0.0;
    double det = 0.0;
    std::complex<double> eig1, eig2;
};

/// Eigenvalues of the quadratic z^2 - tr z + det.
std::pair<std::complex<double>, std::complex<double>> quadratic_eigenvalues(double tr, double det);

/// The four 2x2 diagonal blocks of the cascade Jacobian, in state order:
/// (S1^1,X1^1), (S2^1,X2^1), (S1^2,X1^2), (S2^2,X2^2). The full spectrum is
/// the union of their eigenvalue pairs because the matrix is lower block
/// triangular at every level. Throws StructuralError when entries outside
/// the documented sparsity pattern are nonzero.
std::array<BlockSummary, 4> diagonal_blocks(const Jacobian& J);

/// All eight eigenvalues via the four block quadratics.
std::array<std::complex<double>, 8> block_eigenvalues(const Jacobian& J);

struct StabilityVerdict {
    Verdict numeric = Verdict::Marginal;   // from block eigenvalue real parts
    Verdict table = Verdict::Marginal;     // from the closed-form conditions
    bool agreement = true;                 // false only when both are clear of boundaries and differ
    bool hopf = false;                     // J3^3 det > 0 with trace not clearly negative
    double numeric_margin = 0.0;           // min |Re(lambda)| over all eigenvalues
    double table_margin = 0.0;
    std::array<BlockSummary, 4> blocks{};
};

/// Numeric plus closed-form stability classification of an existing
/// equilibrium. The closed-form side follows the per-family conditions,
/// with every family on a break-even upper branch (j = 2 or l = 2)
/// unstable whenever it exists.
StabilityVerdict classify(const ModelParams& p, const Equilibrium& e);

/// True when det(J3^3) exceeds the margin while the trace is not clearly
/// negative: a complex pair may sit on the imaginary axis. Only meaningful
/// for the reactor-2 coexistence families (E01^11 / E11^11 branches).
bool hopf_candidate(const ModelParams& p, const Equilibrium& e);

struct BranchVerdict {
    Verdict predicted = Verdict::Marginal;  // rule: even branch unstable, last LES, odd by trace
    Verdict classified = Verdict::Marginal;
    bool consistent = true;
    bool hopf = false;
};

/// Branch-ordered stability of an E01^11 / E11^11 family: with roots
/// ordered below the f2 maximum and one beyond it, even branches are
/// unstable, the last is stable, and interior odd branches stand or fall
/// with the trace of J3^3. Cross-checked against classify().
std::vector<BranchVerdict> ordered_branch_stability(const ModelParams& p,
                                                    const std::vector<Equilibrium>& branches);

/// An equilibrium paired with its verdict; the verdict is absent when the
/// equilibrium does not exist.
struct ClassifiedEquilibrium {
    Equilibrium eq;
    std::optional<StabilityVerdict> verdict;
};

std::vector<ClassifiedEquilibrium> classify_all(const ModelParams& p,
                                                const std::vector<Equilibrium>& eqs);
std::vector<ClassifiedEquilibrium> classify_all(const ModelParams& p);

}  // namespace am2
