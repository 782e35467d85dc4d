#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "am2/conditions.hpp"
#include "am2/model.hpp"

namespace am2 {

enum class Verdict { LES, Unstable, Marginal };
const char* to_string(Verdict v) noexcept;

/// Steady states of the upper (reactor-1) subsystem, which is a standalone
/// AM2 chemostat with feed (S1in, S2in) and removal rate alpha*D1.
enum class UpperFamily { E00, E10, E01, E02, E11, E12 };
const char* to_string(UpperFamily f) noexcept;

struct UpperEquilibrium {
    UpperFamily family = UpperFamily::E00;
    double s11 = 0, x11 = 0, s21 = 0, x21 = 0;  // NaN when the family is absent
    bool exists = false;
    bool marginal = false;      // existence condition sits on its boundary
    std::string violated;       // violated existence condition when absent
    Verdict stability = Verdict::Unstable;  // closed-form subsystem verdict
    double stability_margin = 0.0;
};

/// Family label E_{ij}^{kl}: i,k flag biomass-1 presence in reactor 1/2,
/// j,l index the biomass-2 mode (0 absent, 1/2 the break-even branch).
/// `branch` numbers multiple coexistence fixed points within one family.
struct FamilyLabel {
    int i = 0, j = 0, k = 0, l = 0;
    int branch = 0;  // 1-based among the f2 = g2 roots; 0 when unique by construction

    std::string str() const;
    bool unstable_branch() const noexcept { return j == 2 || l == 2; }
    bool operator==(const FamilyLabel&) const = default;
};

/// One steady state of the full cascade, existing or not. Absent
/// equilibria are materialized with the violated condition named so that
/// operating-diagram cells can report why a family is missing.
struct Equilibrium {
    FamilyLabel label;
    SystemState state;  // NaN components when !exists
    bool exists = false;
    bool marginal = false;
    std::string violated;

    // solver diagnostics (NaN when not applicable)
    double x12_star = std::numeric_limits<double>::quiet_NaN();
    double x22_star = std::numeric_limits<double>::quiet_NaN();
    double x2m = std::numeric_limits<double>::quiet_NaN();
    double d = std::numeric_limits<double>::quiet_NaN();
    double phi1 = std::numeric_limits<double>::quiet_NaN();
    double phi2 = std::numeric_limits<double>::quiet_NaN();
    double F = std::numeric_limits<double>::quiet_NaN();
    int root_count = 0;
    bool tangency = false;
};

/// Scalar fixed-point functions of the reactor-2 balance equations.
/// f1/g1 locate the biomass-1 level X1^2, f2/g2 the biomass-2 level X2^2.
/// Holds pointers into the ModelParams it was built from; use transiently.
struct AuxFunctions {
    double x11 = 0;      // upper X1 entering g1
    double x21 = 0;      // upper X2 entering g2
    double sigma = 0;    // f2 argument offset S2^1 - alpha k2 (X1^1 - X1^2)
    double d = 0;        // zero of f2: x21 + sigma/(alpha k3)
    double x2m = 0;      // argmax of f2 (may fall left of x21)
    double alpha_D2 = 0, ak1 = 0, ak2 = 0, ak3 = 0, S1in = 0;
    const GrowthLaw* mu1 = nullptr;
    const GrowthLaw* mu2 = nullptr;

    double f1(double x) const;
    double g1(double x) const;
    double f2(double x) const;
    double g2(double x) const;
    double df1(double x) const;
    double dg1(double x) const;
    double df2(double x) const;
    double dg2(double x) const;
};

/// Builds the fixed-point functions for a given upper equilibrium;
/// x12_star feeds the f2 offset and may be 0 when reactor 2 carries no
/// biomass 1.
AuxFunctions make_aux(const ModelParams& p, double x11_star, double s21_star,
                      double x21_star, double x12_star);

/// F_{tier,j} = lambda1^tier + (k1/k2) (lambda2^{tier,j} - S2in); +inf when
/// either break-even concentration is infinite.
double aux_F(const ModelParams& p, int tier, int j);

/// phi_j = S2in + alpha k2 X1^{2*} - lambda2^{2j}; -inf when the break-even
/// concentration is infinite.
double aux_phi(const ModelParams& p, int j, double x12_star);

/// Unique root of f1 = g1 in (X1^{1*}, S1in/(alpha k1)).
/// Throws InternalError when the bracket carries no sign change.
double solve_x12(const ModelParams& p, const UpperEquilibrium& upper);

struct X22Roots {
    std::vector<double> roots;  // ordered ascending, all in (X2^{1*}, d)
    double x2m = 0;
    double d = 0;
    bool tangency = false;  // even count or two roots closer than 1e-8
};

/// All roots of f2 = g2 in (X2^{1*}, d): a single bisection when f2 is
/// decreasing over the interval, otherwise a fixed 4096-point sign scan of
/// the rising segment plus one bisection past the maximum.
X22Roots solve_x22_all(const ModelParams& p, const UpperEquilibrium& upper, double x12_star);

/// The six steady states of the upper subsystem with existence and
/// stability flags, in the order E00, E10, E01, E02, E11, E12.
std::array<UpperEquilibrium, 6> upper_equilibria(const ModelParams& p);

/// Every steady-state family of the cascade, existing or not, with
/// branch-indexed entries where f2 = g2 has several roots.
std::vector<Equilibrium> enumerate_all(const ModelParams& p);

/// Max-norm of the vector field at an existing equilibrium.
/// Throws std::invalid_argument for an absent one.
double residual(const ModelParams& p, const Equilibrium& e);

/// Boundary tolerance: existence inequalities closer than this to equality
/// are classified marginal and excluded from exists == true.
inline constexpr double kExistenceMargin = 1e-10;

/// Three-way stability classification band: eigenvalue real parts, traces
/// and determinants within this distance of zero give Marginal.
inline constexpr double kStabilityMargin = 1e-8;

}  // namespace am2
