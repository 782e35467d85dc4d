#include "am2/model.hpp"

namespace am2 {

ModelParams::ModelParams(double k1_, double k2_, double k3_, double alpha_, double D_,
                         double r_, double S1in_, double S2in_, GrowthLaw mu1_, GrowthLaw mu2_)
    : k1(k1_), k2(k2_), k3(k3_), alpha(alpha_), D(D_), r(r_),
      S1in(S1in_), S2in(S2in_), mu1(std::move(mu1_)), mu2(std::move(mu2_)) {
    if (!(k2 > 0.0)) throw std::invalid_argument("k2 must be strictly positive");
    if (!(k1 > k2)) throw std::invalid_argument("k1 must exceed k2");
    if (!(k3 > 0.0)) throw std::invalid_argument("k3 must be strictly positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("D must be strictly positive");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
    if (!(S1in >= 0.0) || !std::isfinite(S1in)) throw std::invalid_argument("S1in must be nonnegative");
    if (!(S2in >= 0.0) || !std::isfinite(S2in)) throw std::invalid_argument("S2in must be nonnegative");
    if (mu1.kind() != GrowthKind::MonotoneBounded) {
        throw std::invalid_argument("mu1 must be a monotone bounded law");
    }
    if (mu2.kind() != GrowthKind::Unimodal) {
        throw std::invalid_argument("mu2 must be a unimodal law");
    }
}

ModelParams ModelParams::with(double new_D, double new_r, double new_S1in, double new_S2in) const {
    return ModelParams(k1, k2, k3, alpha, new_D, new_r, new_S1in, new_S2in, mu1, mu2);
}

std::pair<double, double> dilution_rates(const ModelParams& p) {
    return {p.D1(), p.D2()};
}

Vec8 rhs(const ModelParams& p, const SystemState& x) {
    const double D1 = p.D1();
    const double D2 = p.D2();
    const double m11 = p.mu1.value(x.s11());
    const double m21 = p.mu2.value(x.s21());
    const double m12 = p.mu1.value(x.s12());
    const double m22 = p.mu2.value(x.s22());

    Vec8 f;
    f[iS11] = D1 * (p.S1in - x.s11()) - p.k1 * m11 * x.x11();
    f[iX11] = (m11 - p.alpha * D1) * x.x11();
    f[iS21] = D1 * (p.S2in - x.s21()) + p.k2 * m11 * x.x11() - p.k3 * m21 * x.x21();
    f[iX21] = (m21 - p.alpha * D1) * x.x21();
    f[iS12] = D2 * (x.s11() - x.s12()) - p.k1 * m12 * x.x12();
    f[iX12] = p.alpha * D2 * (x.x11() - x.x12()) + m12 * x.x12();
    f[iS22] = D2 * (x.s21() - x.s22()) + p.k2 * m12 * x.x12() - p.k3 * m22 * x.x22();
    f[iX22] = p.alpha * D2 * (x.x21() - x.x22()) + m22 * x.x22();
    return f;
}

bool Jacobian::structural(int row, int col) noexcept {
    switch (row) {
        case iS11: return col == iS11 || col == iX11;
        case iX11: return col == iS11 || col == iX11;
        case iS21: return col == iS11 || col == iX11 || col == iS21 || col == iX21;
        case iX21: return col == iS21 || col == iX21;
        case iS12: return col == iS11 || col == iS12 || col == iX12;
        case iX12: return col == iX11 || col == iS12 || col == iX12;
        case iS22: return col == iS21 || col == iS12 || col == iX12 || col == iS22 || col == iX22;
        case iX22: return col == iX21 || col == iS22 || col == iX22;
        default: return false;
    }
}

Jacobian jacobian(const ModelParams& p, const SystemState& x) {
    const double D1 = p.D1();
    const double D2 = p.D2();
    const double m11 = p.mu1.value(x.s11());
    const double m21 = p.mu2.value(x.s21());
    const double m12 = p.mu1.value(x.s12());
    const double m22 = p.mu2.value(x.s22());
    const double d11 = p.mu1.derivative(x.s11());
    const double d21 = p.mu2.derivative(x.s21());
    const double d12 = p.mu1.derivative(x.s12());
    const double d22 = p.mu2.derivative(x.s22());

    Jacobian J;
    J(iS11, iS11) = -D1 - p.k1 * d11 * x.x11();
    J(iS11, iX11) = -p.k1 * m11;
    J(iX11, iS11) = d11 * x.x11();
    J(iX11, iX11) = m11 - p.alpha * D1;

    J(iS21, iS11) = p.k2 * d11 * x.x11();
    J(iS21, iX11) = p.k2 * m11;
    J(iS21, iS21) = -D1 - p.k3 * d21 * x.x21();
    J(iS21, iX21) = -p.k3 * m21;
    J(iX21, iS21) = d21 * x.x21();
    J(iX21, iX21) = m21 - p.alpha * D1;

    J(iS12, iS11) = D2;
    J(iS12, iS12) = -D2 - p.k1 * d12 * x.x12();
    J(iS12, iX12) = -p.k1 * m12;
    J(iX12, iX11) = p.alpha * D2;
    J(iX12, iS12) = d12 * x.x12();
    J(iX12, iX12) = m12 - p.alpha * D2;

    J(iS22, iS21) = D2;
    J(iS22, iS12) = p.k2 * d12 * x.x12();
    J(iS22, iX12) = p.k2 * m12;
    J(iS22, iS22) = -D2 - p.k3 * d22 * x.x22();
    J(iS22, iX22) = -p.k3 * m22;
    J(iX22, iX21) = p.alpha * D2;
    J(iX22, iS22) = d22 * x.x22();
    J(iX22, iX22) = m22 - p.alpha * D2;
    return J;
}

OmegaFunctionals omega_functionals(const ModelParams& p, const SystemState& x) {
    OmegaFunctionals w;
    w.z1 = x.s11() + (p.k1 - p.k2) * x.x11() + x.s21() + p.k3 * x.x21();
    w.z2 = x.s12() + (p.k1 - p.k2) * x.x12() + x.s22() + p.k3 * x.x22();
    w.bound1 = (p.S1in + p.S2in) / p.alpha;
    w.bound2 = (p.S1in + p.S2in) / (p.alpha * p.alpha);
    return w;
}

bool in_omega(const ModelParams& p, const SystemState& x) {
    for (double c : x.v) {
        if (!(c >= 0.0)) return false;
    }
    const auto w = omega_functionals(p, x);
    return w.z1 <= w.bound1 && w.z2 <= w.bound2;
}

}  // namespace am2
