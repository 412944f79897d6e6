#pragma once

#include <vector>

#include "chemostat/grid.hpp"

namespace chemostat {

/// Substrate level, population density on the trait nodes, and the cached
/// biomass m = integrate(grid, f).
struct SystemState {
    double t = 0.0;
    double s = 0.0;
    std::vector<double> f;
    double m = 0.0;

    /// Builds a state and fills in m by quadrature. Validates f >= 0, s >= 0
    /// and the length of f.
    static SystemState make(double t, double s, std::vector<double> f, const TraitGrid& grid);
};

}  // namespace chemostat
