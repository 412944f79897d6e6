// Acceptance runner. `acceptance N` runs criterion N, `acceptance all` runs
// every criterion. One PASS/FAIL line per criterion; exit status 1 on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemostat/analysis.hpp"
#include "chemostat/controls.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"
#include "chemostat/parallel.hpp"
#include "chemostat/search.hpp"
#include "chemostat/spectral.hpp"
#include "oracles/dense_eigen.hpp"
#include "oracles/ode_rk4.hpp"

using namespace chemostat;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[fail] ";
        }
        detail << what << "; ";
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Baseline experiment: [1, 3], 5000 nodes, r(z) = z, f0 = 5, s0 = 5, s_in = 35, dt = 0.01.
struct Baseline {
    TraitGrid grid;
    Kinetics kin;
    SystemState init;

    explicit Baseline(std::size_t n = 5000)
        : grid(build_grid(1.0, 3.0, n)),
          kin(Kinetics::monod_linear(1.0, grid)),
          init(SystemState::make(0.0, 5.0, std::vector<double>(n, 5.0), grid)) {}

    SimConfig config(double alpha, double horizon) const {
        SimConfig cfg;
        cfg.alpha = alpha;
        cfg.horizon = horizon;
        cfg.record_snapshots = false;
        return cfg;
    }
};

void criterion_1(Outcome& o) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 11 + static_cast<std::size_t>(unit(rng) * 290);
        const TraitGrid g = build_grid(1.0, 3.0, n);
        const Kinetics kin = Kinetics::monod_linear(1.0, g);
        SimConfig cfg;
        cfg.alpha = trial % 4 == 0 ? 0.0 : 0.02 * unit(rng);
        cfg.s_in = 5.0 + 45.0 * unit(rng);
        cfg.dt = 0.001 + 0.019 * unit(rng);
        cfg.horizon = 1.0 + 19.0 * unit(rng);
        cfg.record_snapshots = false;

        std::vector<double> f0(n);
        for (auto& v : f0) v = unit(rng) < 0.2 ? 0.0 : 10.0 * unit(rng);
        const double s0 = cfg.s_in * (0.01 + 0.98 * unit(rng));

        const int pieces = 1 + static_cast<int>(unit(rng) * 5);
        std::vector<double> breaks, values;
        for (int k = 0; k < pieces - 1; ++k) breaks.push_back(cfg.horizon * unit(rng));
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        for (std::size_t k = 0; k <= breaks.size(); ++k) values.push_back(2.0 * unit(rng));

        const SystemState init = SystemState::make(0.0, s0, f0, g);
        const Trajectory traj =
            simulate(cfg, ControlLaw::piecewise(breaks, values), init, kin, g);
        const double m0 = std::abs(init.s - cfg.s_in + init.m) + 1.0;
        worst = std::max(worst, traj.m_law_residual / m0);
    }
    o.check(worst <= 1e-9, "max relative M-law residual " + fmt(worst) + " <= 1e-9");
}

void criterion_2(Outcome& o) {
    const TraitGrid g = build_grid(1.0, 3.0, 1000);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const double s_in = 35.0;
    double worst = 0.0;
    const std::vector<ControlLaw> laws{
        ControlLaw::auxostat(AuxostatVariant::IV, 9.0), ControlLaw::constant(0.3),
        ControlLaw::composite(ControlLaw::constant(bounds(kin, s_in, g).upsilon),
                              ControlLaw::auxostat(AuxostatVariant::IV, 1.4))};
    for (double s0 : {5.0, 20.0}) {
        const SystemState init =
            SystemState::make(0.0, s0, std::vector<double>(g.n, (s_in - s0) / 2.0), g);
        for (const auto& law : laws) {
            SimConfig cfg;
            cfg.alpha = 0.005;
            cfg.horizon = 100.0;
            cfg.record_snapshots = false;
            const Trajectory traj = simulate(cfg, law, init, kin, g);
            for (const auto& smp : traj.samples) worst = std::max(worst, std::abs(smp.s + smp.m - s_in));
        }
    }
    o.check(worst <= 1e-9 * s_in, "max |s + m - s_in| = " + fmt(worst) + " <= " + fmt(1e-9 * s_in));
}

void criterion_3(Outcome& o) {
    const TraitGrid g = build_grid(1.0, 3.0, 11);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 10.0;
    cfg.record_snapshots = false;
    const std::vector<double> f0(g.n, 5.0);
    const SystemState init = SystemState::make(0.0, 5.0, f0, g);
    const Trajectory traj = simulate(cfg, ControlLaw::constant(0.2), init, kin, g);
    const oracle::OdeState ref =
        oracle::rk4_monod({5.0, f0}, g.nodes, g.weights, 1.0, 0.2, 35.0, 1e-5, 1000000);
    double gap = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) gap = std::max(gap, std::abs(traj.final_state.f[i] - ref.f[i]));
    o.check(gap <= 5e-3, "max node gap to RK4 " + fmt(gap) + " <= 5e-3");

    const TraitGrid big = build_grid(1.0, 3.0, 500);
    const Kinetics big_kin = Kinetics::monod_linear(1.0, big);
    std::vector<double> holes(big.n, 5.0);
    for (std::size_t i = 0; i < big.n; ++i) {
        if (i < 100 || (i >= 250 && i < 300) || i >= 450) holes[i] = 0.0;
    }
    SimConfig scfg;
    scfg.horizon = 50.0;
    scfg.record_snapshots = false;
    const Trajectory st = simulate(scfg, ControlLaw::auxostat(AuxostatVariant::IV, 9.0),
                                   SystemState::make(0.0, 5.0, holes, big), big_kin, big);
    double leak = 0.0;
    for (std::size_t i = 0; i < big.n; ++i) {
        if (holes[i] == 0.0) leak = std::max(leak, st.peak_density[i]);
    }
    o.check(leak <= 1e-14, "max density on initially empty nodes " + fmt(leak) + " <= 1e-14");
}

void criterion_4(Outcome& o) {
    const Baseline base;
    {
        const Trajectory traj = simulate(base.config(0.005, 100.0),
                                         ControlLaw::auxostat(AuxostatVariant::I, 9.0), base.init,
                                         base.kin, base.grid);
        double drift = 0.0;
        for (const auto& smp : traj.samples) drift = std::max(drift, std::abs(smp.s - base.init.s));
        o.check(drift <= 1e-12 * 35.0, "variant I max |s - s0| " + fmt(drift));
    }
    for (auto variant : {AuxostatVariant::III, AuxostatVariant::IV}) {
        const Trajectory traj = simulate(base.config(0.005, 100.0), ControlLaw::auxostat(variant, 9.0),
                                         base.init, base.kin, base.grid);
        const auto& last = traj.samples.back();
        const std::string name = variant == AuxostatVariant::III ? "III" : "IV";
        o.check(std::abs(last.s - 9.0) <= 0.05, "variant " + name + " s(100) = " + fmt(last.s));
        o.check(std::abs(last.m - 26.0) <= 0.1, "variant " + name + " m(100) = " + fmt(last.m));
    }
}

void criterion_5(Outcome& o) {
    double worst_lambda = 0.0, worst_l1 = 0.0, worst_res = 0.0;
    bool bracketed = true;
    for (std::size_t n : {50u, 200u, 400u}) {
        const TraitGrid g = build_grid(1.0, 3.0, n);
        const Kinetics kin = Kinetics::monod_linear(1.0, g);
        const NeumannLaplacian lap = build_laplacian(g);
        const std::vector<double> mu = eval_mu(kin, 9.0, g);
        const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
        for (double alpha : {1e-3, 1e-2, 1.0}) {
            const EigenPair pair = principal_eigenpair(alpha, 9.0, kin, g, lap);
            const oracle::DenseEigen ref = oracle::principal(1.0, 3.0, static_cast<int>(n), alpha, mu);
            double l1 = 0.0;
            for (std::size_t i = 0; i < n; ++i) l1 += g.weights[i] * std::abs(pair.phi[i] - ref.phi[i]);
            worst_lambda = std::max(worst_lambda, std::abs(pair.lambda1 - ref.lambda1));
            worst_l1 = std::max(worst_l1, l1);
            worst_res = std::max(worst_res, pair.residual);
            bracketed = bracketed && -pair.lambda1 >= *lo && -pair.lambda1 <= *hi;
        }
    }
    o.check(worst_lambda <= 1e-8, "eigenvalue gap " + fmt(worst_lambda));
    o.check(worst_l1 <= 1e-6, "eigenfunction L1 gap " + fmt(worst_l1));
    o.check(worst_res <= 1e-10, "residual " + fmt(worst_res));
    o.check(bracketed, "-lambda1 within [min mu, max mu]");
}

void criterion_6(Outcome& o) {
    const Baseline base;
    const EigenPair pair =
        principal_eigenpair(0.005, 9.0, base.kin, base.grid, build_laplacian(base.grid));
    const StationaryState st = stationary_state(pair, 9.0, 35.0);
    const double norm = integrate(base.grid, st.f_bar);

    const SimConfig cfg = base.config(0.005, 20.0);
    const NeumannLaplacian lap = build_laplacian(base.grid);
    Stepper stepper(cfg, base.kin, base.grid, lap);
    const ControlLaw law = ControlLaw::auxostat(AuxostatVariant::IV, 9.0);
    ControlEvaluator control(law, ControlContext{base.kin, base.grid, 35.0,
                                                 bounds(base.kin, 35.0, base.grid).u_bar});
    SystemState state = SystemState::make(0.0, st.s_bar, st.f_bar, base.grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < cfg.step_count(); ++k) {
        stepper.advance(state, control(state.t, state), k);
        double gap = 0.0;
        for (std::size_t i = 0; i < base.grid.n; ++i) {
            gap += base.grid.weights[i] * std::abs(state.f[i] - st.f_bar[i]);
        }
        worst = std::max(worst, gap / norm);
    }
    o.check(worst <= 1e-2, "max relative L1 drift from stationary state " + fmt(worst));
}

void criterion_7(Outcome& o) {
    const TraitGrid g = build_grid(1.0, 3.0, 2000);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const std::vector<double> alphas{1e-1, 1e-2, 1e-3, 1e-4};
    const auto curve = eigen_K_curve(alphas, 9.0, kin, g);
    bool decreasing = true;
    std::string values;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        values += (i ? ", " : "") + fmt(curve[i].second);
        if (i > 0 && !(curve[i].second < curve[i - 1].second)) decreasing = false;
    }
    o.check(decreasing, "K strictly decreasing [" + values + "]");
    o.check(curve.back().second <= 1.05, "K at alpha 1e-4 " + fmt(curve.back().second) + " <= 1.05");
}

void criterion_8(Outcome& o) {
    const Baseline base;
    const ControlLaw law = ControlLaw::auxostat(AuxostatVariant::IV, 9.0);
    const std::vector<double> alphas{0.0, 0.001, 0.005, 0.009, 0.01};
    std::vector<Trajectory> runs(alphas.size());
    parallel_for(alphas.size(), default_workers(), [&](std::size_t i) {
        runs[i] = simulate(base.config(alphas[i], 100.0), law, base.init, base.kin, base.grid);
    });
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        const EntryReport rep = entry_time(runs[i], 1.5);
        o.check(rep.entry_time && *rep.entry_time < 35.0,
                "alpha " + fmt(alphas[i]) + " entry time " +
                    (rep.entry_time ? fmt(*rep.entry_time) : std::string("none")) + " < 35");
    }
    const double k_final = runs.back().samples.back().K;
    o.check(std::abs(k_final - 1.511) <= 0.01 * 1.511, "alpha 0.01 terminal K " + fmt(k_final));
}

SweepSpec sweep_spec(const Baseline& base, SweepFamily family, std::vector<double> values,
                     double alpha) {
    return SweepSpec{family, std::move(values),
                     SweepBase{base.config(alpha, 60.0), base.kin, base.grid, base.init}};
}

void criterion_9(Outcome& o) {
    {
        const auto start = std::chrono::steady_clock::now();
        const Baseline coarse(500);
        const SweepResult res = run_sweep(
            sweep_spec(coarse, SweepFamily::AuxostatIV, open_interval_values(0.0, 35.0, 35), 0.001));
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.check(res.best && res.best->first >= 1.0 && res.best->first <= 2.0,
                "smoke (n=500, 35 values) sigma* " + (res.best ? fmt(res.best->first) : "none"));
        o.check(secs < 120.0, "smoke runtime " + fmt(secs) + " s < 120 s");
    }
    const Baseline base;
    bool any = false;
    std::string tried;
    for (double alpha : {0.001, 0.0005, 0.005, 0.01}) {
        const SweepResult res = run_sweep(
            sweep_spec(base, SweepFamily::AuxostatIV, open_interval_values(0.0, 35.0, 340), alpha));
        const bool ok = res.best && res.best->first >= 1.2 && res.best->first <= 1.6 &&
                        res.best->second >= 12.3 && res.best->second <= 15.1;
        tried += "alpha " + fmt(alpha) + ": " +
                 (res.best ? "(" + fmt(res.best->first) + ", " + fmt(res.best->second) + ")"
                           : std::string("no best")) +
                 " ";
        if (ok) {
            any = true;
            break;
        }
    }
    o.check(any, "sigma* in [1.2, 1.6], T in [12.3, 15.1]: " + tried);
}

void criterion_10(Outcome& o) {
    const Baseline base;
    const double alpha = 0.001;
    const SweepSpec spec =
        sweep_spec(base, SweepFamily::ConstantU, open_interval_values(0.0, 8.0, 800), alpha);
    const SweepResult res = run_sweep(spec);
    if (!res.best) {
        o.check(false, "no held entry in the u sweep");
        return;
    }
    const auto [u_star, t_star] = *res.best;
    o.check(u_star >= 0.3 && u_star <= 0.5, "u* " + fmt(u_star) + " in [0.3, 0.5]");
    o.check(t_star >= 13.2 && t_star <= 16.2, "T(u*) " + fmt(t_star) + " in [13.2, 16.2]");
    const Trajectory traj =
        simulate(base.config(alpha, 60.0), spec.law_for(u_star), base.init, base.kin, base.grid);
    const double s_end = traj.samples.back().s;
    o.check(s_end >= 0.8 && s_end <= 0.95, "settled substrate " + fmt(s_end) + " in [0.8, 0.95]");
}

void criterion_11(Outcome& o) {
    const Baseline base(500);
    const ControlLaw law = ControlLaw::auxostat(AuxostatVariant::IV, 9.0);
    const Trajectory traj = simulate(base.config(0.005, 60.0), law, base.init, base.kin, base.grid);
    const auto r = base.kin.half_saturation();

    {
        bool scaled_ok = true, bounded = true;
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> f(base.grid.n), g(base.grid.n);
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] = unit(rng) < 0.5 ? 0.0 : unit(rng);
                g[i] = 7.3 * f[i];
            }
            f[trial % f.size()] += 1.0;
            g[trial % g.size()] = 7.3 * f[trial % f.size()];
            const double k = k_functional(base.grid, r, f);
            scaled_ok = scaled_ok && std::abs(k_functional(base.grid, r, g) - k) <= 1e-12 * k;
            bounded = bounded && k >= 1.0 && k <= 3.0;
        }
        o.check(scaled_ok, "K scaling invariance");
        o.check(bounded, "K within [1, 3]");
    }
    {
        bool monotone = true;
        double previous = std::numeric_limits<double>::infinity();
        for (double k0 = 1.05; k0 <= 2.95; k0 += 0.05) {
            const double e = entry_time(traj, k0).entry_time.value_or(std::numeric_limits<double>::infinity());
            monotone = monotone && e <= previous;
            previous = e;
        }
        o.check(monotone, "entry time non-increasing in k0");
        const EntryReport top = entry_time(traj, 3.0);
        o.check(top.entry_time && *top.entry_time == 0.0, "k0 >= max r gives entry time 0");
    }
    {
        const Trajectory again = simulate(base.config(0.005, 60.0), law, base.init, base.kin, base.grid);
        const bool same = again.samples.size() == traj.samples.size() &&
                          std::memcmp(again.samples.data(), traj.samples.data(),
                                      traj.samples.size() * sizeof(Sample)) == 0 &&
                          again.final_state.f == traj.final_state.f;
        o.check(same, "bit-identical rerun");
    }
    {
        SweepSpec spec = sweep_spec(base, SweepFamily::AuxostatIV, open_interval_values(0.0, 35.0, 12), 0.001);
        spec.base.cfg.horizon = 30.0;
        const SweepResult serial = run_sweep(spec, 1);
        const SweepResult parallel = run_sweep(spec, 4);
        bool equal = serial.rows.size() == parallel.rows.size() && serial.best == parallel.best;
        for (std::size_t i = 0; equal && i < serial.rows.size(); ++i) {
            equal = serial.rows[i].param == parallel.rows[i].param &&
                    serial.rows[i].entry_time == parallel.rows[i].entry_time &&
                    serial.rows[i].washout_time == parallel.rows[i].washout_time;
        }
        o.check(equal, "parallel sweep equals serial sweep");
    }
    {
        std::vector<double> crossings;
        for (double dt : {0.04, 0.02, 0.01, 0.005}) {
            SimConfig cfg = base.config(0.005, 50.0);
            cfg.dt = dt;
            const EntryReport rep = entry_time(simulate(cfg, law, base.init, base.kin, base.grid), 1.5);
            crossings.push_back(rep.crossing_time.value_or(std::nan("")));
        }
        std::string ratios;
        bool in_band = true;
        for (std::size_t i = 0; i + 2 < crossings.size(); ++i) {
            const double q = (crossings[i + 1] - crossings[i]) / (crossings[i + 2] - crossings[i + 1]);
            ratios += (i ? ", " : "") + fmt(q);
            in_band = in_band && q >= 1.5 && q <= 2.5;
        }
        o.check(in_band, "dt-halving difference ratios [" + ratios + "] in [1.5, 2.5]");
    }
}

const std::vector<std::function<void(Outcome&)>> kCriteria{
    criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};

bool run_one(std::size_t index) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        kCriteria[index - 1](o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s (%.1f s) %s\n", index, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <1..%zu|all>\n", kCriteria.size());
        return 2;
    }
    const std::string which = argv[1];
    bool ok = true;
    if (which == "all") {
        for (std::size_t i = 1; i <= kCriteria.size(); ++i) ok = run_one(i) && ok;
    } else {
        const long index = std::strtol(which.c_str(), nullptr, 10);
        if (index < 1 || index > static_cast<long>(kCriteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
            return 2;
        }
        ok = run_one(static_cast<std::size_t>(index));
    }
    return ok ? 0 : 1;
}
