#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chemostat/controls.hpp"
#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"
#include "chemostat/state.hpp"

namespace chemostat {

struct SimConfig {
    double alpha = 0.0;  ///< mutation (trait diffusion) rate
    double s_in = 35.0;
    double dt = 0.01;
    double horizon = 100.0;
    /// Steps between density snapshots. 0 picks horizon/10.
    std::size_t snapshot_every = 0;
    bool record_snapshots = true;
    double k0 = 1.5;

    void validate() const;
    std::size_t step_count() const;
};

struct Sample {
    double t;
    double s;
    double m;
    double u;  ///< control applied on [t, t + dt); at the last sample, the next value
    double K;  ///< selection functional, NaN once the population is degenerate
};

struct Snapshot {
    double t;
    std::vector<double> f;
};

struct Trajectory {
    double alpha = 0.0;
    std::vector<Sample> samples;  ///< t_0 = init.t through the horizon
    std::vector<Snapshot> snapshots;
    std::size_t clamp_count = 0;
    std::optional<double> switch_time;
    /// max_n |M^n - M^0 prod_{k<n} (1 - dt u^k)| with M = s - s_in + m.
    double m_law_residual = 0.0;
    /// Node-wise maximum of f over all steps (including t_0).
    std::vector<double> peak_density;
    SystemState final_state;
};

/// One semi-implicit Euler step: explicit reaction and substrate update,
/// implicit diffusion.
SystemState step(const SystemState& state, double u, const SimConfig& cfg, const Kinetics& kin,
                 const TraitGrid& grid, const NeumannLaplacian& lap);

/// Reusable stepper: factors (I - dt alpha L) once.
class Stepper {
public:
    Stepper(const SimConfig& cfg, const Kinetics& kin, const TraitGrid& grid,
            const NeumannLaplacian& lap);

    /// Advances `state` in place by one step with control u. Returns the
    /// uptake integral of mu(s^n, .) f^n used in the substrate update.
    double advance(SystemState& state, double u, std::optional<std::size_t> step_index = {});

private:
    const SimConfig& cfg_;
    const Kinetics& kin_;
    const TraitGrid& grid_;
    std::optional<TridiagonalSolver> diffusion_;
    std::vector<double> mu_;
};

/// Closed- or open-loop run over ceil(horizon/dt) steps.
Trajectory simulate(const SimConfig& cfg, const ControlLaw& law, const SystemState& init,
                    const Kinetics& kin, const TraitGrid& grid);

/// Nodes whose density ever exceeded `threshold` along a run with alpha = 0.
std::vector<bool> support_mask(const Trajectory& traj, double threshold);

}  // namespace chemostat
