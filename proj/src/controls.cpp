#include "chemostat/controls.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemostat/errors.hpp"

namespace chemostat {

ControlLaw ControlLaw::constant(double value) {
    return ControlLaw{ConstantControl{value}, std::nullopt, true};
}

ControlLaw ControlLaw::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    return ControlLaw{PiecewiseConstantControl{std::move(breakpoints), std::move(values)},
                      std::nullopt, true};
}

ControlLaw ControlLaw::auxostat(AuxostatVariant variant, double sigma) {
    return ControlLaw{AuxostatControl{variant, sigma}, std::nullopt, true};
}

ControlLaw ControlLaw::composite(ControlLaw before, ControlLaw after,
                                 std::optional<double> switch_time) {
    return ControlLaw{CompositeControl{switch_time,
                                       std::make_shared<const ControlLaw>(std::move(before)),
                                       std::make_shared<const ControlLaw>(std::move(after))},
                      std::nullopt, true};
}

void ControlLaw::validate(double s_in) const {
    if (u_max && !(*u_max > 0.0)) throw ConfigError("u_max must be positive");
    if (const auto* c = std::get_if<ConstantControl>(&kind)) {
        if (!(c->value >= 0.0) || !std::isfinite(c->value)) {
            throw ConfigError("constant control must be finite and >= 0");
        }
    } else if (const auto* p = std::get_if<PiecewiseConstantControl>(&kind)) {
        if (p->values.size() != p->breakpoints.size() + 1) {
            throw ConfigError("piecewise control needs one more value than breakpoints");
        }
        if (!std::is_sorted(p->breakpoints.begin(), p->breakpoints.end()) ||
            std::adjacent_find(p->breakpoints.begin(), p->breakpoints.end()) != p->breakpoints.end()) {
            throw ConfigError("piecewise control breakpoints must be strictly increasing");
        }
        for (double v : p->values) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw ConfigError("piecewise control values must be finite and >= 0");
            }
        }
    } else if (const auto* a = std::get_if<AuxostatControl>(&kind)) {
        if (!(a->sigma >= 0.0) || !(a->sigma < s_in)) {
            throw ConfigError("auxostat set-point must satisfy 0 <= sigma < s_in");
        }
    } else {
        const auto& comp = std::get<CompositeControl>(kind);
        if (!comp.before || !comp.after) throw ConfigError("composite control needs both laws");
        if (comp.switch_time && !(*comp.switch_time >= 0.0)) {
            throw ConfigError("composite switch time must be >= 0");
        }
        comp.before->validate(s_in);
        comp.after->validate(s_in);
    }
}

std::span<const double> ControlEvaluator::RateCache::rates(const Kinetics& kin, double s) {
    for (const auto& [sigma, values] : by_sigma) {
        if (sigma == s) return values;
    }
    std::vector<double> values(kin.size());
    kin.rates(s, values);
    by_sigma.emplace_back(s, std::move(values));
    return by_sigma.back().second;
}

namespace {

double scheduled(const PiecewiseConstantControl& p, double t) {
    const auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), t);
    return p.values[static_cast<std::size_t>(it - p.breakpoints.begin())];
}

double auxostat_value(const AuxostatControl& a, const SystemState& st, const ControlContext& ctx,
                      ControlEvaluator::RateCache* cache) {
    const bool state_denominator =
        a.variant == AuxostatVariant::I || a.variant == AuxostatVariant::III;
    const bool state_rates = a.variant == AuxostatVariant::I || a.variant == AuxostatVariant::II;

    double denom = 0.0;
    if (state_denominator) {
        denom = ctx.s_in - st.s;
        if (denom < 1e-9 * ctx.s_in) {
            throw SingularDenominator("auxostat: s_in - s(t) = " + std::to_string(denom) +
                                          " is singular",
                                      std::nullopt, st.t);
        }
    } else {
        denom = ctx.s_in - a.sigma;
        if (!(denom > 0.0)) throw ConfigError("auxostat set-point must be below s_in");
    }

    const double level = state_rates ? st.s : a.sigma;
    std::vector<double> local;
    std::span<const double> mu;
    if (cache == nullptr) {
        local = eval_mu(ctx.kin, level, ctx.grid);
        mu = local;
    } else if (state_rates) {
        cache->scratch.resize(ctx.kin.size());
        ctx.kin.rates(level, cache->scratch);
        mu = cache->scratch;
    } else {
        mu = cache->rates(ctx.kin, level);
    }
    const double uptake = integrate_product(ctx.grid, mu, st.f);
    return uptake / denom;
}

double evaluate(const ControlLaw& law, double t, const SystemState& st, const ControlContext& ctx,
                ControlDiagnostics* diag, ControlEvaluator::RateCache* cache) {
    double value = 0.0;
    if (const auto* c = std::get_if<ConstantControl>(&law.kind)) {
        value = c->value;
    } else if (const auto* p = std::get_if<PiecewiseConstantControl>(&law.kind)) {
        value = scheduled(*p, t);
    } else if (const auto* a = std::get_if<AuxostatControl>(&law.kind)) {
        value = auxostat_value(*a, st, ctx, cache);
    } else {
        const auto& comp = std::get<CompositeControl>(law.kind);
        bool switched = false;
        if (comp.switch_time) {
            switched = t >= *comp.switch_time;
        } else if (diag != nullptr && diag->switch_time) {
            switched = true;
        } else {
            switched = st.s + st.m <= 2.0 * ctx.s_in;
        }
        if (switched && diag != nullptr && !diag->switch_time) diag->switch_time = t;
        value = evaluate(switched ? *comp.after : *comp.before, t, st, ctx, diag, cache);
    }

    if (law.clamp) {
        const double u_max = law.u_max.value_or(ctx.default_u_max);
        if (value < 0.0 || value > u_max) {
            if (diag != nullptr) ++diag->clamp_count;
            value = std::clamp(value, 0.0, u_max);
        }
    }
    return value;
}

}  // namespace

double eval_control(const ControlLaw& law, double t, const SystemState& state,
                    const ControlContext& ctx, ControlDiagnostics* diag) {
    return evaluate(law, t, state, ctx, diag, nullptr);
}

ControlEvaluator::ControlEvaluator(const ControlLaw& law, ControlContext ctx)
    : law_(law), ctx_(ctx) {}

double ControlEvaluator::operator()(double t, const SystemState& state) {
    return evaluate(law_, t, state, ctx_, &diag_, &cache_);
}

}  // namespace chemostat
