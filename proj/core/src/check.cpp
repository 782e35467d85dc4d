#include "am2/check.hpp"

#include <algorithm>
#include <cmath>

namespace am2::check {

namespace {

using Complex = std::complex<double>;
using CMat = std::array<Complex, 64>;
using CVec = std::array<Complex, 8>;

// LU factorization with partial pivoting; returns false on exact
// singularity. `perm_sign` tracks the permutation parity for determinants.
bool lu_factor(CMat& a, std::array<int, 8>& piv, int& perm_sign) {
    perm_sign = 1;
    for (int i = 0; i < 8; ++i) piv[i] = i;
    for (int col = 0; col < 8; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * 8 + col]);
        for (int row = col + 1; row < 8; ++row) {
            const double mag = std::abs(a[static_cast<std::size_t>(row) * 8 + col]);
            if (mag > best) {
                best = mag;
                pivot = row;
            }
        }
        if (best == 0.0) return false;
        if (pivot != col) {
            for (int j = 0; j < 8; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot) * 8 + j], a[static_cast<std::size_t>(col) * 8 + j]);
            }
            std::swap(piv[pivot], piv[col]);
            perm_sign = -perm_sign;
        }
        const Complex d = a[static_cast<std::size_t>(col) * 8 + col];
        for (int row = col + 1; row < 8; ++row) {
            const Complex m = a[static_cast<std::size_t>(row) * 8 + col] / d;
            a[static_cast<std::size_t>(row) * 8 + col] = m;
            for (int j = col + 1; j < 8; ++j) {
                a[static_cast<std::size_t>(row) * 8 + j] -= m * a[static_cast<std::size_t>(col) * 8 + j];
            }
        }
    }
    return true;
}

void lu_solve(const CMat& a, const std::array<int, 8>& piv, CVec& b) {
    CVec x;
    for (int i = 0; i < 8; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(piv[i])];
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i) * 8 + j] * x[static_cast<std::size_t>(j)];
    }
    for (int i = 7; i >= 0; --i) {
        for (int j = i + 1; j < 8; ++j) x[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i) * 8 + j] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] /= a[static_cast<std::size_t>(i) * 8 + i];
    }
    b = x;
}

CMat shifted(const Jacobian& J, Complex z) {
    CMat a;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            a[static_cast<std::size_t>(r) * 8 + c] = Complex(J(r, c), 0.0);
            if (r == c) a[static_cast<std::size_t>(r) * 8 + c] -= z;
        }
    }
    return a;
}

double norm2(const CVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

ModelParams random_params(Rng& rng, const ModelParams& base, const DrawBox& box) {
    const double D = rng.log_uniform(box.D_lo, box.D_hi);
    const double r = rng.uniform(box.r_lo, box.r_hi);
    const double s1 = box.Sin_lo + (box.Sin_hi - box.Sin_lo) * std::max(rng.uniform(), 1e-12);
    const double s2 = box.Sin_lo + (box.Sin_hi - box.Sin_lo) * std::max(rng.uniform(), 1e-12);
    return base.with(D, r, s1, s2);
}

Jacobian fd_jacobian(const ModelParams& p, const SystemState& x, double rel_step) {
    Jacobian J;
    for (int col = 0; col < 8; ++col) {
        const double h = rel_step * std::max(1.0, std::abs(x[static_cast<std::size_t>(col)]));
        SystemState xp = x;
        SystemState xm = x;
        xp[static_cast<std::size_t>(col)] += h;
        xm[static_cast<std::size_t>(col)] -= h;
        const Vec8 fp = rhs(p, xp);
        const Vec8 fm = rhs(p, xm);
        for (int row = 0; row < 8; ++row) {
            J(row, col) = (fp[static_cast<std::size_t>(row)] - fm[static_cast<std::size_t>(row)]) / (2.0 * h);
        }
    }
    return J;
}

std::complex<double> shifted_determinant(const Jacobian& J, std::complex<double> z) {
    CMat a = shifted(J, z);
    std::array<int, 8> piv;
    int sign = 1;
    if (!lu_factor(a, piv, sign)) return {0.0, 0.0};
    Complex det(static_cast<double>(sign), 0.0);
    for (int i = 0; i < 8; ++i) det *= a[static_cast<std::size_t>(i) * 8 + i];
    return det;
}

double resolvent_determinant_mismatch(const Jacobian& J, int samples) {
    // Sample radius comfortably outside the spectrum (|lambda| <= ||J||_inf).
    double norm_inf = 0.0;
    for (int r = 0; r < 8; ++r) {
        double row = 0.0;
        for (int c = 0; c < 8; ++c) row += std::abs(J(r, c));
        norm_inf = std::max(norm_inf, row);
    }
    const double rho = 2.0 * (1.0 + norm_inf);

    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double theta = (2.0 * M_PI * k + 0.5) / samples;
        const Complex z(rho * std::cos(theta), rho * std::sin(theta));

        // product of the four diagonal-block quadratics, det(z I - block)
        Complex from_blocks(1.0, 0.0);
        for (int b = 0; b < 4; ++b) {
            const int o = 2 * b;
            const double tr = J(o, o) + J(o + 1, o + 1);
            const double det = J(o, o) * J(o + 1, o + 1) - J(o, o + 1) * J(o + 1, o);
            from_blocks *= (z * z - tr * z + det);
        }
        // dense route: det(z I - J) = (-1)^8 det(J - z I)
        const Complex dense = shifted_determinant(J, z);
        const double denom = std::max({std::abs(from_blocks), std::abs(dense), 1.0});
        worst = std::max(worst, std::abs(from_blocks - dense) / denom);
    }
    return worst;
}

EigenPair eigenpair_near(const Jacobian& J, std::complex<double> approx) {
    // Shift slightly off the eigenvalue so the factorization stays usable.
    const double scale = std::max(1.0, std::abs(approx));
    Complex shift = approx + Complex(1e-10 * scale, 1e-10 * scale);

    CMat a = shifted(J, shift);
    std::array<int, 8> piv;
    int sign = 1;
    if (!lu_factor(a, piv, sign)) {
        shift += Complex(1e-8 * scale, 0.0);
        a = shifted(J, shift);
        if (!lu_factor(a, piv, sign)) {
            throw InternalError("eigenpair_near: singular shifted matrix");
        }
    }

    CVec v;
    for (int i = 0; i < 8; ++i) v[static_cast<std::size_t>(i)] = Complex(1.0 / std::sqrt(8.0), 0.0);
    for (int it = 0; it < 4; ++it) {
        lu_solve(a, piv, v);
        const double n = norm2(v);
        if (!(n > 0.0) || !std::isfinite(n)) throw InternalError("eigenpair_near: iteration collapsed");
        for (auto& z : v) z /= n;
    }

    // Rayleigh quotient and residual against the dense matrix.
    CVec Jv{};
    for (int r = 0; r < 8; ++r) {
        Complex s(0.0, 0.0);
        for (int c = 0; c < 8; ++c) s += J(r, c) * v[static_cast<std::size_t>(c)];
        Jv[static_cast<std::size_t>(r)] = s;
    }
    Complex rq(0.0, 0.0);
    for (int i = 0; i < 8; ++i) rq += std::conj(v[static_cast<std::size_t>(i)]) * Jv[static_cast<std::size_t>(i)];
    CVec res;
    for (int i = 0; i < 8; ++i) res[static_cast<std::size_t>(i)] = Jv[static_cast<std::size_t>(i)] - rq * v[static_cast<std::size_t>(i)];

    EigenPair out;
    out.value = rq;
    out.vec = v;
    out.residual = norm2(res);
    return out;
}

Vec8 real_eigen_direction(const Jacobian& J, std::complex<double> lambda) {
    const EigenPair pair = eigenpair_near(J, lambda);
    Vec8 dir{};
    double n = 0.0;
    for (int i = 0; i < 8; ++i) {
        dir[static_cast<std::size_t>(i)] = pair.vec[static_cast<std::size_t>(i)].real();
        n += dir[static_cast<std::size_t>(i)] * dir[static_cast<std::size_t>(i)];
    }
    n = std::sqrt(n);
    if (n < 1e-12) {  // purely imaginary eigenvector phase; rotate
        n = 0.0;
        for (int i = 0; i < 8; ++i) {
            dir[static_cast<std::size_t>(i)] = pair.vec[static_cast<std::size_t>(i)].imag();
            n += dir[static_cast<std::size_t>(i)] * dir[static_cast<std::size_t>(i)];
        }
        n = std::sqrt(n);
    }
    for (auto& d : dir) d /= n;
    return dir;
}

}  // namespace am2::check
