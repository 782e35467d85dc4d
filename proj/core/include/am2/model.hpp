#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "am2/growth.hpp"

namespace am2 {

/// Thrown when a matrix does not have the sparsity pattern an operation
/// relies on.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// State component order used throughout: substrate/biomass pairs of
/// reactor 1 followed by reactor 2.
enum StateIndex : int { iS11 = 0, iX11, iS21, iX21, iS12, iX12, iS22, iX22 };

inline constexpr std::size_t kStateDim = 8;

using Vec8 = std::array<double, kStateDim>;

/// Concentrations (S1^1, X1^1, S2^1, X2^1, S1^2, X1^2, S2^2, X2^2).
struct SystemState {
    Vec8 v{};

    SystemState() = default;
    explicit SystemState(const Vec8& values) : v(values) {}
    SystemState(double s11, double x11, double s21, double x21,
                double s12, double x12, double s22, double x22)
        : v{s11, x11, s21, x21, s12, x12, s22, x22} {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    double s11() const noexcept { return v[iS11]; }
    double x11() const noexcept { return v[iX11]; }
    double s21() const noexcept { return v[iS21]; }
    double x21() const noexcept { return v[iX21]; }
    double s12() const noexcept { return v[iS12]; }
    double x12() const noexcept { return v[iX12]; }
    double s22() const noexcept { return v[iS22]; }
    double x22() const noexcept { return v[iX22]; }
};

/// Operating and stoichiometric parameters of the two-reactor cascade.
/// Validated once at construction; immutable afterwards.
struct ModelParams {
    double k1, k2, k3;     // yield coefficients, k1 > k2 > 0, k3 > 0
    double alpha;          // biomass retention factor in (0,1)
    double D;              // dilution rate Q/V > 0
    double r;              // volume fraction of reactor 1 in (0,1)
    double S1in, S2in;     // feed concentrations >= 0
    GrowthLaw mu1, mu2;    // monotone and unimodal laws

    ModelParams(double k1_, double k2_, double k3_, double alpha_, double D_,
                double r_, double S1in_, double S2in_, GrowthLaw mu1_, GrowthLaw mu2_);

    double r1() const noexcept { return r; }
    double r2() const noexcept { return 1.0 - r; }
    double D1() const noexcept { return D / r; }
    double D2() const noexcept { return D / (1.0 - r); }

    /// Copy with one operating parameter replaced (used by diagram scans).
    ModelParams with(double new_D, double new_r, double new_S1in, double new_S2in) const;
};

/// (D_1, D_2) = (D/r, D/(1-r)).
std::pair<double, double> dilution_rates(const ModelParams& p);

/// Right-hand side of the cascade ODE at state x.
Vec8 rhs(const ModelParams& p, const SystemState& x);

/// 8x8 Jacobian with the lower-block-triangular sparsity of the cascade:
/// reactor 1 never sees reactor 2, and within each reactor the (S1,X1)
/// pair never sees the (S2,X2) pair.
struct Jacobian {
    std::array<double, kStateDim * kStateDim> a{};

    double& operator()(int row, int col) { return a[static_cast<std::size_t>(row) * kStateDim + col]; }
    double operator()(int row, int col) const { return a[static_cast<std::size_t>(row) * kStateDim + col]; }

    /// True where an entry may be nonzero.
    static bool structural(int row, int col) noexcept;
};

Jacobian jacobian(const ModelParams& p, const SystemState& x);

/// Weighted mass totals per reactor and the bounds that define the
/// invariant region: Z_i = S1^i + (k1-k2) X1^i + S2^i + k3 X2^i and
/// bound_i = (S1in + S2in) / alpha^i.
struct OmegaFunctionals {
    double z1, z2;
    double bound1, bound2;
};

OmegaFunctionals omega_functionals(const ModelParams& p, const SystemState& x);

/// True when the state lies inside the invariant region (componentwise
/// nonnegative, both mass totals within bound).
bool in_omega(const ModelParams& p, const SystemState& x);

}  // namespace am2
