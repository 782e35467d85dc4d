#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace am2 {

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Thrown when an operation requires the other kind of growth law
/// (e.g. asking a monotone law for its peak).
class WrongKindError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown when a numerical routine hits a state that the underlying
/// theory rules out (broken bracket, lost root, ...).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GrowthKind {
    MonotoneBounded,  // mu(0)=0, strictly increasing, bounded by a supremum
    Unimodal          // mu(0)=0, single interior maximum, mu(+inf)=0
};

class GrowthLaw;
struct BreakEven;
BreakEven lambda1(const GrowthLaw& mu1, double D, double r, double alpha, int tier);
BreakEven lambda2(const GrowthLaw& mu2, double D, double r, double alpha, int tier);

/// Specific growth rate law. Canonical instances are Monod (monotone
/// bounded) and Haldane (unimodal, substrate inhibition); custom laws can
/// be supplied as callables together with the constants the solvers need.
///
/// Values are immutable after construction; all evaluation is pure.
class GrowthLaw {
public:
    /// mu(s) = m1 * s / (K1 + s)
    static GrowthLaw monod(double m1, double K1);

    /// mu(s) = m2 * s / (K2 + s + s^2/KI), peak at sqrt(K2*KI)
    static GrowthLaw haldane(double m2, double K2, double KI);

    /// Monotone bounded law with supremum `sup_rate`.
    static GrowthLaw custom_monotone(std::function<double(double)> mu,
                                     std::function<double(double)> dmu,
                                     double sup_rate);

    /// Unimodal law whose maximum sits at `s_peak`.
    static GrowthLaw custom_unimodal(std::function<double(double)> mu,
                                     std::function<double(double)> dmu,
                                     double s_peak);

    GrowthKind kind() const noexcept { return kind_; }
    bool is_monotone() const noexcept { return kind_ == GrowthKind::MonotoneBounded; }

    /// mu(s). Throws std::domain_error for s < 0.
    double value(double s) const;

    /// Analytic mu'(s). Throws std::domain_error for s < 0.
    double derivative(double s) const;

    /// Supremum of the law: m1 for a monotone law, mu(s_peak) for a
    /// unimodal one.
    double max_rate() const noexcept { return max_rate_; }

    /// (s_peak, mu(s_peak)) of a unimodal law. Throws WrongKindError for
    /// monotone laws.
    std::pair<double, double> peak() const;

    /// Named parameters for serialization ("m1", "K1", ...). Empty for
    /// custom laws.
    const std::vector<std::pair<std::string, double>>& parameters() const noexcept {
        return params_;
    }
    const std::string& name() const noexcept { return name_; }

private:
    enum class Form { Monod, Haldane, Custom };

    GrowthLaw() = default;

    GrowthKind kind_ = GrowthKind::MonotoneBounded;
    Form form_ = Form::Custom;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // Monod: m1,K1 ; Haldane: m2,K2,KI
    double max_rate_ = 0.0;
    double peak_s_ = kInfinite;
    std::function<double(double)> fval_, fder_;
    std::string name_ = "custom";
    std::vector<std::pair<std::string, double>> params_;

    friend BreakEven lambda1(const GrowthLaw&, double, double, double, int);
    friend BreakEven lambda2(const GrowthLaw&, double, double, double, int);
};

/// Break-even concentration(s) for one reactor: the solutions of
/// mu(S) = alpha * D_i with D_i = D / r_i (r_1 = r, r_2 = 1 - r).
/// +inf encodes the "no finite solution" convention.
struct BreakEven {
    int tier = 1;             // which reactor the removal rate belongs to
    double removal = 0.0;     // alpha * D_i
    double low = kInfinite;   // unique root (monotone law) or lower root
    double high = kInfinite;  // upper root; kInfinite for monotone laws
    bool tangent = false;     // removal rate hit the peak: low == high == s_peak

    bool finite() const noexcept { return std::isfinite(low); }
};

/// Root of mu1(S) = alpha*D_i for a monotone law; +inf when the removal
/// rate reaches or exceeds the supremum.
BreakEven lambda1(const GrowthLaw& mu1, double D, double r, double alpha, int tier);

/// Both roots of mu2(S) = alpha*D_i for a unimodal law, ordered and
/// bracketing the peak; +inf pair when the removal rate exceeds the peak
/// value, tangent double root when it matches it exactly.
BreakEven lambda2(const GrowthLaw& mu2, double D, double r, double alpha, int tier);

struct HypothesisViolation {
    double s_lo = 0.0;
    double s_hi = 0.0;
    std::string what;
};

struct HypothesisReport {
    std::vector<HypothesisViolation> violations;
    int slope_sign_changes = 0;  // finite-difference slope sign flips on the grid
    bool ok() const noexcept { return violations.empty(); }
};

/// Numerically checks H1/H2-style shape requirements on a sample grid.
/// Violations are findings, not errors; the grid itself must be nonempty,
/// positive and strictly increasing.
HypothesisReport validate_hypotheses(const GrowthLaw& law, std::span<const double> grid);

}  // namespace am2
