#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"
#include "chemostat/state.hpp"

namespace chemostat {

/// Auxostat feedback laws. With I_mu(x) = integral of mu(x, z) f(z) dz:
///   I:   I_mu(s)     / (s_in - s)
///   II:  I_mu(s)     / (s_in - sigma)
///   III: I_mu(sigma) / (s_in - s)
///   IV:  I_mu(sigma) / (s_in - sigma)
enum class AuxostatVariant { I, II, III, IV };

struct ConstantControl {
    double value = 0.0;
};

/// Right-continuous schedule: values[0] before breakpoints[0], values[k] on
/// [breakpoints[k-1], breakpoints[k]). values.size() == breakpoints.size() + 1.
struct PiecewiseConstantControl {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

struct AuxostatControl {
    AuxostatVariant variant = AuxostatVariant::IV;
    double sigma = 0.0;
};

struct ControlLaw;

/// `before` until the switch time, `after` from then on. Without an explicit
/// switch time the law switches at the first evaluation where
/// s + m <= 2 s_in, and stays switched.
struct CompositeControl {
    std::optional<double> switch_time;
    std::shared_ptr<const ControlLaw> before;
    std::shared_ptr<const ControlLaw> after;
};

struct ControlLaw {
    std::variant<ConstantControl, PiecewiseConstantControl, AuxostatControl, CompositeControl> kind;
    /// Upper admissibility bound. Unset means "use u_bar of the kinetics".
    std::optional<double> u_max;
    bool clamp = true;

    static ControlLaw constant(double value);
    static ControlLaw piecewise(std::vector<double> breakpoints, std::vector<double> values);
    static ControlLaw auxostat(AuxostatVariant variant, double sigma);
    static ControlLaw composite(ControlLaw before, ControlLaw after,
                                std::optional<double> switch_time = std::nullopt);

    /// Throws ConfigError when the law is inconsistent with s_in.
    void validate(double s_in) const;
};

/// Per-trajectory bookkeeping for control evaluation.
struct ControlDiagnostics {
    std::size_t clamp_count = 0;
    std::optional<double> switch_time;
};

struct ControlContext {
    const Kinetics& kin;
    const TraitGrid& grid;
    double s_in;
    /// Bound used when the law leaves u_max unset.
    double default_u_max;
};

/// Evaluates the law at (t, state). Clamps to [0, u_max] when enabled and
/// counts clamp activations in `diag`.
double eval_control(const ControlLaw& law, double t, const SystemState& state,
                    const ControlContext& ctx, ControlDiagnostics* diag = nullptr);

/// Caches mu(sigma, .) for auxostat laws so that closed-loop stepping costs
/// one quadrature per step. Owned by a single trajectory.
class ControlEvaluator {
public:
    ControlEvaluator(const ControlLaw& law, ControlContext ctx);

    double operator()(double t, const SystemState& state);

    const ControlDiagnostics& diagnostics() const noexcept { return diag_; }

    /// mu(sigma, .) at the nodes, computed once per distinct sigma.
    struct RateCache {
        std::vector<std::pair<double, std::vector<double>>> by_sigma;
        std::vector<double> scratch;
        std::span<const double> rates(const Kinetics& kin, double s);
    };

private:
    const ControlLaw& law_;
    ControlContext ctx_;
    ControlDiagnostics diag_;
    RateCache cache_;
};

}  // namespace chemostat
