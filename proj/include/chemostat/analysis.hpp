#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chemostat/dynamics.hpp"
#include "chemostat/grid.hpp"

namespace chemostat {

/// Biomass at or below this is treated as no population at all.
inline constexpr double kDegenerateMass = 1e-300;

/// Target set {f : K[f] <= k0}. Meaningful only for min r < k0 < max r.
struct TargetSpec {
    double k0 = 1.5;
    std::vector<double> r;

    /// Throws ConfigError outside the non-degenerate band.
    void validate() const;
};

/// Reach-and-stay report for one trajectory.
struct EntryReport {
    /// Earliest sample time after which K <= k0 holds through the horizon.
    std::optional<double> entry_time;
    bool held_until_horizon = false;
    /// First sample with K <= k0, held or not.
    std::optional<double> first_touch;
    double k_min = 0.0;
    /// Linear interpolation of the final downward crossing of k0 between the
    /// two bracketing samples. Not a sample time; used for order studies.
    std::optional<double> crossing_time;
};

/// Mean half-saturation weighted by abundance: integral(r f) / integral(f).
double k_functional(const TraitGrid& grid, std::span<const double> r, std::span<const double> f);

EntryReport entry_time(const Trajectory& traj, double k0);

/// Same as above on raw series; NaN values of K count as outside the target.
EntryReport entry_time(std::span<const double> times, std::span<const double> k_values, double k0);

/// First sample time with m < m_threshold.
std::optional<double> washout_check(const Trajectory& traj, double m_threshold);

}  // namespace chemostat
