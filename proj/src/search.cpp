#include "chemostat/search.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "chemostat/analysis.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/parallel.hpp"

namespace chemostat {

namespace {

std::pair<double, double> admissible_range(const SweepSpec& spec) {
    if (spec.family == SweepFamily::AuxostatIV) return {0.0, spec.base.cfg.s_in};
    const double u_max =
        spec.base.u_max.value_or(bounds(spec.base.kin, spec.base.cfg.s_in, spec.base.grid).u_bar);
    return {0.0, u_max};
}

bool admissible(const SweepSpec& spec, double value) {
    const auto [lo, hi] = admissible_range(spec);
    if (spec.family == SweepFamily::AuxostatIV) return value > lo && value < hi;
    return value >= lo && value <= hi;
}

SweepRow run_row(const SweepSpec& spec, double param) {
    SweepRow row;
    row.param = param;
    try {
        SimConfig cfg = spec.base.cfg;
        cfg.record_snapshots = false;
        const Trajectory traj = simulate(cfg, spec.law_for(param), spec.base.init, spec.base.kin,
                                         spec.base.grid);
        const EntryReport report = entry_time(traj, cfg.k0);
        row.entry_time = report.entry_time;
        row.held = report.held_until_horizon;
        row.washout_time = washout_check(traj, spec.base.washout_threshold);
    } catch (const std::exception& e) {
        row.failure = e.what();
    }
    return row;
}

}  // namespace

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep: no parameter values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw ConfigError("sweep: parameter values must be strictly increasing");
        }
        if (!admissible(*this, values[i])) {
            throw ConfigError("sweep: parameter " + std::to_string(values[i]) +
                              " outside the admissible range");
        }
    }
    base.cfg.validate();
}

ControlLaw SweepSpec::law_for(double param) const {
    ControlLaw law = family == SweepFamily::AuxostatIV
                         ? ControlLaw::auxostat(AuxostatVariant::IV, param)
                         : ControlLaw::constant(param);
    law.u_max = base.u_max;
    law.clamp = base.clamp;
    return law;
}

std::vector<double> open_interval_values(double lo, double hi, std::size_t count) {
    if (!(hi > lo)) throw ConfigError("sweep interval needs max > min");
    if (count == 0) throw ConfigError("sweep needs at least one value");
    std::vector<double> values(count);
    const double step = (hi - lo) / static_cast<double>(count + 1);
    for (std::size_t k = 0; k < count; ++k) values[k] = lo + step * static_cast<double>(k + 1);
    return values;
}

void select_best(SweepResult& result) {
    result.best.reset();
    for (const auto& row : result.rows) {
        if (!row.held || !row.entry_time) continue;
        if (!result.best || *row.entry_time < result.best->second ||
            (*row.entry_time == result.best->second && row.param < result.best->first)) {
            result.best = std::make_pair(row.param, *row.entry_time);
        }
    }
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
    spec.validate();
    SweepResult result;
    result.rows.resize(spec.values.size());
    parallel_for(spec.values.size(), workers,
                 [&](std::size_t i) { result.rows[i] = run_row(spec, spec.values[i]); });
    select_best(result);
    return result;
}

SweepResult refine_best(const SweepResult& result, const SweepSpec& spec, double width,
                        std::size_t count, std::size_t workers) {
    if (!result.best) throw ContractViolation("refine_best: coarse sweep has no best value");
    if (!(width >= 0.0)) throw ConfigError("refine_best: width must be >= 0");
    if (width == 0.0 || count == 0) return result;

    const double center = result.best->first;
    std::vector<double> candidates;
    candidates.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double v = count == 1 ? center
                                    : center - width + 2.0 * width * static_cast<double>(k) /
                                                           static_cast<double>(count - 1);
        if (!admissible(spec, v)) continue;
        const bool known = std::any_of(result.rows.begin(), result.rows.end(),
                                       [&](const SweepRow& row) { return row.param == v; });
        if (!known) candidates.push_back(v);
    }

    SweepResult merged = result;
    if (!candidates.empty()) {
        SweepSpec fine = spec;
        fine.values = candidates;
        const SweepResult extra = run_sweep(fine, workers);
        merged.rows.insert(merged.rows.end(), extra.rows.begin(), extra.rows.end());
        std::stable_sort(merged.rows.begin(), merged.rows.end(),
                         [](const SweepRow& a, const SweepRow& b) { return a.param < b.param; });
    }
    select_best(merged);
    return merged;
}

}  // namespace chemostat
