#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "chemostat/analysis.hpp"
#include "chemostat/config.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/search.hpp"
#include "chemostat/spectral.hpp"

namespace py = pybind11;
using namespace chemostat;

namespace {

py::array_t<double> array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Config to_config(const py::dict& d) {
    Config cfg;
    for (const auto& [k, v] : d) {
        const std::string key = py::cast<std::string>(k);
        if (py::isinstance<py::bool_>(v)) {
            cfg.set(key, v.cast<bool>());
        } else if (py::isinstance<py::str>(v)) {
            cfg.set(key, v.cast<std::string>());
        } else if (py::isinstance<py::int_>(v) || py::isinstance<py::float_>(v)) {
            cfg.set(key, v.cast<double>());
        } else {
            cfg.set(key, v.cast<std::vector<double>>());
        }
    }
    return cfg;
}

py::dict to_dict(const Config& cfg) {
    py::dict out;
    for (const auto& [key, value] : cfg.entries()) {
        std::visit([&](const auto& v) { out[py::str(key)] = py::cast(v); }, value);
    }
    return out;
}

py::object optional_float(const std::optional<double>& v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict simulate_py(const py::dict& overrides) {
    const ModelSetup setup = resolve(to_config(overrides));
    Trajectory traj;
    {
        py::gil_scoped_release release;
        traj = simulate(setup.sim, setup.law, setup.init, setup.kin, setup.grid);
    }
    const std::size_t n = traj.samples.size();
    std::vector<double> t(n), s(n), m(n), u(n), k(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = traj.samples[i].t;
        s[i] = traj.samples[i].s;
        m[i] = traj.samples[i].m;
        u[i] = traj.samples[i].u;
        k[i] = traj.samples[i].K;
    }
    const EntryReport rep = entry_time(traj, setup.sim.k0);
    py::list snapshots;
    for (const auto& snap : traj.snapshots) snapshots.append(py::make_tuple(snap.t, array(snap.f)));
    py::dict out;
    out["z"] = array(setup.grid.nodes);
    out["t"] = array(t);
    out["s"] = array(s);
    out["m"] = array(m);
    out["u"] = array(u);
    out["K"] = array(k);
    out["f"] = array(traj.final_state.f);
    out["snapshots"] = snapshots;
    out["entry_time"] = optional_float(rep.entry_time);
    out["clamp_count"] = traj.clamp_count;
    out["switch_time"] = optional_float(traj.switch_time);
    out["m_law_residual"] = traj.m_law_residual;
    return out;
}

py::dict eigen_py(const py::dict& overrides) {
    const ModelSetup setup = resolve(to_config(overrides));
    EigenPair pair;
    {
        py::gil_scoped_release release;
        pair = principal_eigenpair(setup.sim.alpha, setup.sigma, setup.kin, setup.grid,
                                   build_laplacian(setup.grid), setup.eigen);
    }
    py::dict out;
    out["lambda1"] = pair.lambda1;
    out["K"] = k_functional(setup.grid, setup.kin.half_saturation(), pair.phi);
    out["residual"] = pair.residual;
    out["iterations"] = pair.iterations;
    out["z"] = array(setup.grid.nodes);
    out["phi"] = array(pair.phi);
    return out;
}

py::dict sweep_py(const std::string& family, const std::vector<double>& values,
                  const py::dict& overrides, std::size_t workers) {
    SweepFamily fam;
    if (family == "sigma") {
        fam = SweepFamily::AuxostatIV;
    } else if (family == "u") {
        fam = SweepFamily::ConstantU;
    } else {
        throw ConfigError("sweep family must be 'sigma' or 'u', got '" + family + "'");
    }
    const ModelSetup setup = resolve(to_config(overrides));
    const SweepSpec spec{fam, values,
                         SweepBase{setup.sim, setup.kin, setup.grid, setup.init, setup.law.u_max,
                                   setup.law.clamp, setup.washout_threshold}};
    SweepResult res;
    {
        py::gil_scoped_release release;
        res = run_sweep(spec, workers);
    }
    py::list rows;
    for (const auto& r : res.rows) {
        py::dict row;
        row["param"] = r.param;
        row["entry_time"] = optional_float(r.entry_time);
        row["held"] = r.held;
        row["washout_time"] = optional_float(r.washout_time);
        row["failure"] = r.failure ? py::object(py::str(*r.failure)) : py::object(py::none());
        rows.append(row);
    }
    py::dict out;
    out["rows"] = rows;
    out["best"] = res.best ? py::object(py::make_tuple(res.best->first, res.best->second))
                           : py::object(py::none());
    return out;
}

py::dict entry_time_py(const std::vector<double>& t, const std::vector<double>& k, double k0) {
    if (t.size() != k.size()) throw ConfigError("t and K must have the same length");
    const EntryReport rep = entry_time(t, k, k0);
    py::dict out;
    out["entry_time"] = optional_float(rep.entry_time);
    out["held"] = rep.held_until_horizon;
    out["first_touch"] = optional_float(rep.first_touch);
    out["crossing_time"] = optional_float(rep.crossing_time);
    return out;
}

double k_functional_py(double z_min, double z_max, const std::vector<double>& r,
                       const std::vector<double>& f) {
    const TraitGrid grid = build_grid(z_min, z_max, f.size());
    if (r.size() != f.size()) throw ConfigError("r and f must have the same length");
    return k_functional(grid, r, f);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trait-structured chemostat: simulation, spectral analysis and control sweeps";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DegeneratePopulation>(m, "DegeneratePopulation", PyExc_RuntimeError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

    m.def("default_config", [] { return to_dict(default_config()); },
          "Every configuration key with its default value.");
    m.def("materialize", [](const py::dict& d) { return to_dict(materialize(to_config(d))); },
          py::arg("config") = py::dict(),
          "Defaults overlaid with `config`, derived values written out.");
    m.def("simulate", &simulate_py, py::arg("config") = py::dict(),
          "Run one trajectory. Returns arrays t, s, m, u, K plus the final density.");
    m.def("eigen", &eigen_py, py::arg("config") = py::dict(),
          "Principal eigenpair at (alpha, sigma) and K of the eigenfunction.");
    m.def("sweep", &sweep_py, py::arg("family"), py::arg("values"),
          py::arg("config") = py::dict(), py::arg("workers") = 0,
          "Entry-time sweep over auxostat set-points ('sigma') or constant dilutions ('u').");
    m.def("entry_time", &entry_time_py, py::arg("t"), py::arg("K"), py::arg("k0"));
    m.def("k_functional", &k_functional_py, py::arg("z_min"), py::arg("z_max"), py::arg("r"),
          py::arg("f"), "Abundance-weighted mean of r on a uniform grid over [z_min, z_max].");
}
