#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "am2/model.hpp"

namespace am2::check {

/// Deterministic generator with hand-rolled double conversion so draws are
/// reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

private:
    std::uint64_t state_;
};

/// Operating-parameter ranges used by the randomized property suites.
struct DrawBox {
    double D_lo = 0.01, D_hi = 2.0;      // log-uniform
    double r_lo = 0.05, r_hi = 0.95;     // uniform
    double Sin_lo = 0.0, Sin_hi = 20.0;  // uniform, open at 0
};

/// Fresh operating parameters with D, r, S1in, S2in redrawn from the box;
/// stoichiometry and growth laws are kept from `base`.
ModelParams random_params(Rng& rng, const ModelParams& base, const DrawBox& box = {});

/// Central-difference Jacobian of the vector field; steps scale with the
/// component magnitude. States must keep x_j - h nonnegative.
Jacobian fd_jacobian(const ModelParams& p, const SystemState& x, double rel_step = 1e-6);

/// det(J - z I) by complex LU with partial pivoting.
std::complex<double> shifted_determinant(const Jacobian& J, std::complex<double> z);

/// Worst relative mismatch between the two characteristic-polynomial
/// routes, sampled on a circle enclosing the spectrum: the product of the
/// four diagonal-block quadratics versus the dense determinant
/// det(z I - J). The dense side never uses the sparsity pattern.
double resolvent_determinant_mismatch(const Jacobian& J, int samples = 16);

struct EigenPair {
    std::complex<double> value;             // Rayleigh-refined eigenvalue
    std::array<std::complex<double>, 8> vec;  // unit eigenvector
    double residual;                        // ||J v - lambda v||_2
};

/// Eigenpair near `approx` by shifted inverse iteration on the dense
/// matrix, refined with the Rayleigh quotient.
EigenPair eigenpair_near(const Jacobian& J, std::complex<double> approx);

/// Real direction spanning (part of) the eigenspace at `lambda`, unit norm.
Vec8 real_eigen_direction(const Jacobian& J, std::complex<double> lambda);

/// Number of sign changes of f over n equal intervals of [a, b].
template <class F>
int count_sign_changes(F&& f, double a, double b, int n) {
    int changes = 0;
    double prev = f(a);
    for (int i = 1; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double cur = f(x);
        if (prev != 0.0 && cur != 0.0 && (prev > 0.0) != (cur > 0.0)) ++changes;
        if (cur != 0.0) prev = cur;
    }
    return changes;
}

}  // namespace am2::check
