#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemostat/controls.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"
#include "chemostat/state.hpp"

namespace chemostat {

enum class SweepFamily { AuxostatIV, ConstantU };

/// Everything shared by the rows of a sweep.
struct SweepBase {
    SimConfig cfg;
    Kinetics kin;
    TraitGrid grid;
    SystemState init;
    std::optional<double> u_max;  ///< unset: u_bar of the kinetics
    bool clamp = true;
    double washout_threshold = 1e-6;
};

struct SweepSpec {
    SweepFamily family = SweepFamily::AuxostatIV;
    std::vector<double> values;
    SweepBase base;

    /// Non-empty, strictly increasing, inside the family's admissible range.
    void validate() const;
    ControlLaw law_for(double param) const;
};

struct SweepRow {
    double param = 0.0;
    std::optional<double> entry_time;
    bool held = false;
    std::optional<double> washout_time;
    std::optional<std::string> failure;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// (param*, T*) minimizing the entry time over held rows; ties go to the
    /// smaller parameter.
    std::optional<std::pair<double, double>> best;
};

/// `count` uniformly spaced values strictly inside (lo, hi).
std::vector<double> open_interval_values(double lo, double hi, std::size_t count);

/// One independent simulation per value. Failed simulations become rows
/// with `failure` set. Rows come back in input order whatever `workers` is.
SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 0);

/// Re-sweeps `count` values on [p* - width, p* + width] clipped to the
/// admissible range and merges them with the coarse rows.
SweepResult refine_best(const SweepResult& result, const SweepSpec& spec, double width,
                        std::size_t count, std::size_t workers = 0);

/// Recomputes `best` from `rows`.
void select_best(SweepResult& result);

}  // namespace chemostat
