#include "chemostat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemostat/analysis.hpp"
#include "chemostat/errors.hpp"

namespace chemostat {

void SimConfig::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
    if (!(s_in > 0.0) || !std::isfinite(s_in)) throw ConfigError("s_in must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
    if (!(horizon >= dt) || !std::isfinite(horizon)) throw ConfigError("horizon must be >= dt");
}

std::size_t SimConfig::step_count() const {
    return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

Stepper::Stepper(const SimConfig& cfg, const Kinetics& kin, const TraitGrid& grid,
                 const NeumannLaplacian& lap)
    : cfg_(cfg), kin_(kin), grid_(grid), mu_(grid.n) {
    if (kin.size() != grid.n || lap.size() != grid.n) {
        throw ContractViolation("Stepper: kinetics, grid and Laplacian sizes differ");
    }
    if (cfg.alpha > 0.0) diffusion_.emplace(identity_minus(lap, cfg.dt * cfg.alpha));
}

double Stepper::advance(SystemState& st, double u, std::optional<std::size_t> step_index) {
    const double dt = cfg_.dt;
    const double t_next = st.t + dt;
    if (!(u >= 0.0) || !std::isfinite(u)) {
        throw NumericalBlowup("invalid control value " + std::to_string(u), step_index, t_next);
    }
    kin_.rates(st.s, mu_);

    auto& f = st.f;
    double uptake = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
        const double fi = f[i];
        uptake += grid_.weights[i] * mu_[i] * fi;
        f[i] = fi + dt * (mu_[i] - u) * fi;
    }
    if (diffusion_) diffusion_->solve(f);

    st.s = st.s + dt * (-uptake + u * (cfg_.s_in - st.s));
    st.t = t_next;

    double f_max = 0.0;
    bool finite = std::isfinite(st.s);
    for (double v : f) {
        finite = finite && std::isfinite(v);
        f_max = std::max(f_max, v);
    }
    if (!finite) throw NumericalBlowup("non-finite state", step_index, t_next);

    const double dust = -1e-12 * f_max;
    for (std::size_t i = 0; i < grid_.n; ++i) {
        if (f[i] < 0.0) {
            if (f[i] < dust) {
                throw PositivityViolation("negative density " + std::to_string(f[i]) +
                                              " at node " + std::to_string(i) +
                                              "; dt too large for u = " + std::to_string(u),
                                          step_index, t_next);
            }
            f[i] = 0.0;
        }
    }
    st.m = integrate(grid_, f);
    return uptake;
}

SystemState step(const SystemState& state, double u, const SimConfig& cfg, const Kinetics& kin,
                 const TraitGrid& grid, const NeumannLaplacian& lap) {
    if (state.f.size() != grid.n) throw ContractViolation("step: state/grid size mismatch");
    Stepper stepper(cfg, kin, grid, lap);
    SystemState next = state;
    stepper.advance(next, u);
    return next;
}

namespace {

double selection_or_nan(const TraitGrid& grid, std::span<const double> r,
                        const std::vector<double>& f, double m) {
    if (r.empty() || !(m > kDegenerateMass)) return std::nan("");
    return k_functional(grid, r, f);
}

}  // namespace

Trajectory simulate(const SimConfig& cfg, const ControlLaw& law, const SystemState& init,
                    const Kinetics& kin, const TraitGrid& grid) {
    cfg.validate();
    law.validate(cfg.s_in);
    if (init.f.size() != grid.n) throw ContractViolation("simulate: initial state/grid mismatch");

    const NeumannLaplacian lap = build_laplacian(grid);
    Stepper stepper(cfg, kin, grid, lap);
    const KineticsBounds kb = bounds(kin, cfg.s_in, grid);
    ControlEvaluator control(law, ControlContext{kin, grid, cfg.s_in, kb.u_bar});
    const std::span<const double> r = kin.half_saturation();

    const std::size_t steps = cfg.step_count();
    const std::size_t snap_every =
        cfg.snapshot_every > 0 ? cfg.snapshot_every : std::max<std::size_t>(1, steps / 10);

    Trajectory traj;
    traj.alpha = cfg.alpha;
    traj.samples.reserve(steps + 1);
    traj.peak_density = init.f;

    SystemState st = init;
    st.m = integrate(grid, st.f);
    const double t0 = st.t;
    const double m_law_0 = st.s - cfg.s_in + st.m;
    double decay = 1.0;

    for (std::size_t n = 0;; ++n) {
        const double u = control(st.t, st);
        const double predicted = m_law_0 * decay;
        const double actual = st.s - cfg.s_in + st.m;
        traj.m_law_residual = std::max(traj.m_law_residual, std::abs(actual - predicted));
        traj.samples.push_back(Sample{st.t, st.s, st.m, u, selection_or_nan(grid, r, st.f, st.m)});
        if (cfg.record_snapshots && n % snap_every == 0) traj.snapshots.push_back({st.t, st.f});
        if (n == steps) break;

        stepper.advance(st, u, n);
        // Times are n*dt from the start rather than accumulated sums.
        st.t = t0 + static_cast<double>(n + 1) * cfg.dt;
        decay *= 1.0 - cfg.dt * u;
        for (std::size_t i = 0; i < grid.n; ++i) {
            traj.peak_density[i] = std::max(traj.peak_density[i], st.f[i]);
        }
    }
    if (cfg.record_snapshots && steps % snap_every != 0) traj.snapshots.push_back({st.t, st.f});

    traj.clamp_count = control.diagnostics().clamp_count;
    traj.switch_time = control.diagnostics().switch_time;
    traj.final_state = std::move(st);
    return traj;
}

std::vector<bool> support_mask(const Trajectory& traj, double threshold) {
    if (traj.alpha != 0.0) {
        throw ContractViolation("support_mask is only meaningful for alpha = 0 runs");
    }
    std::vector<bool> mask(traj.peak_density.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = traj.peak_density[i] > threshold;
    return mask;
}

}  // namespace chemostat
