#include "chemostat/state.hpp"

#include <cmath>
#include <string>

#include "chemostat/errors.hpp"

namespace chemostat {

SystemState SystemState::make(double t, double s, std::vector<double> f, const TraitGrid& grid) {
    if (f.size() != grid.n) {
        throw ConfigError("initial density has " + std::to_string(f.size()) +
                          " entries, expected " + std::to_string(grid.n));
    }
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("substrate must be finite and >= 0");
    for (double v : f) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("population density must be finite and >= 0");
        }
    }
    SystemState st;
    st.t = t;
    st.s = s;
    st.m = integrate(grid, f);
    st.f = std::move(f);
    return st;
}

}  // namespace chemostat
