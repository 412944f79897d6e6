#include "chemostat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemostat/errors.hpp"

namespace chemostat {

void TargetSpec::validate() const {
    if (r.empty()) throw ConfigError("target: empty half-saturation profile");
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    if (!(*lo < k0 && k0 < *hi)) {
        throw ConfigError("target threshold k0 must lie strictly between min r and max r");
    }
}

double k_functional(const TraitGrid& grid, std::span<const double> r, std::span<const double> f) {
    const double mass = integrate(grid, f);
    if (!(mass > kDegenerateMass)) {
        throw DegeneratePopulation("selection functional undefined: population mass is zero");
    }
    return integrate_product(grid, r, f) / mass;
}

EntryReport entry_time(std::span<const double> times, std::span<const double> k_values, double k0) {
    if (times.size() != k_values.size()) throw ContractViolation("entry_time: series length mismatch");
    if (times.empty()) throw ContractViolation("entry_time: empty trajectory");

    EntryReport report;
    report.k_min = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> last_outside;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double k = k_values[i];
        const bool inside = k <= k0;
        if (inside && !report.first_touch) report.first_touch = times[i];
        if (!inside) last_outside = i;
        if (!std::isnan(k)) report.k_min = std::min(report.k_min, k);
    }

    if (!last_outside) {
        report.entry_time = times.front();
        report.crossing_time = times.front();
    } else if (*last_outside + 1 < times.size()) {
        const std::size_t j = *last_outside;
        report.entry_time = times[j + 1];
        const double ka = k_values[j];
        const double kb = k_values[j + 1];
        if (std::isnan(ka) || ka == kb) {
            report.crossing_time = times[j + 1];
        } else {
            report.crossing_time = times[j] + (ka - k0) / (ka - kb) * (times[j + 1] - times[j]);
        }
    }
    report.held_until_horizon = report.entry_time.has_value();
    return report;
}

EntryReport entry_time(const Trajectory& traj, double k0) {
    std::vector<double> t(traj.samples.size());
    std::vector<double> k(traj.samples.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = traj.samples[i].t;
        k[i] = traj.samples[i].K;
    }
    return entry_time(t, k, k0);
}

std::optional<double> washout_check(const Trajectory& traj, double m_threshold) {
    for (const auto& sample : traj.samples) {
        if (sample.m < m_threshold) return sample.t;
    }
    return std::nullopt;
}

}  // namespace chemostat
