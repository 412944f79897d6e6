#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemostat/analysis.hpp"
#include "chemostat/config.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/io.hpp"
#include "chemostat/parallel.hpp"
#include "chemostat/search.hpp"
#include "chemostat/spectral.hpp"

#ifndef CHEMOSTAT_VERSION
#define CHEMOSTAT_VERSION "0.0.0"
#endif

namespace chemostat::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::size_t workers = 0;
    std::vector<std::string> assignments;
};

/// Flag values that map directly onto config keys.
struct FlagOverrides {
    std::map<std::string, double> numbers;
    std::optional<std::vector<double>> alphas;
};

nlohmann::json to_json(const Config& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : cfg.entries()) {
        std::visit([&](const auto& v) { j[key] = v; }, value);
    }
    return j;
}

/// defaults < command defaults < file < --set < flags
Config layer_config(const GlobalOptions& global, const FlagOverrides& flags,
                    const Config& command_defaults) {
    Config user;
    if (!global.config_path.empty()) user = Config::load(global.config_path);
    for (const auto& a : global.assignments) user.set_from_string(a);
    for (const auto& [key, value] : flags.numbers) user.set(key, value);
    if (flags.alphas) user.set("alphas", *flags.alphas);

    Config cfg = command_defaults;
    cfg.merge(user);
    return cfg;
}

void write_manifest(const fs::path& dir, const std::string& command, const Config& materialized,
                    double wall_seconds) {
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = to_json(materialized);
    manifest["output_dir"] = dir.string();
    manifest["timings"] = {{"wall_seconds", wall_seconds}};
    manifest["version"] = CHEMOSTAT_VERSION;
    io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const GlobalOptions& global, const FlagOverrides& flags, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = materialize(layer_config(global, flags, Config{}));
    const ModelSetup setup = resolve(cfg);
    const Trajectory traj = simulate(setup.sim, setup.law, setup.init, setup.kin, setup.grid);

    const fs::path dir = global.out_dir;
    std::ostringstream csv;
    io::write_trajectory(csv, traj);
    io::write_file(dir / "trajectory.csv", csv.str());
    for (const auto& snap : traj.snapshots) {
        std::ostringstream profile;
        io::write_profile(profile, setup.grid, snap.f);
        io::write_file(dir / io::snapshot_filename(snap.t), profile.str());
    }
    write_manifest(dir, "simulate", cfg, seconds_since(start));

    const EntryReport report = entry_time(traj, setup.sim.k0);
    const auto& last = traj.samples.back();
    out << "final t=" << io::format_double(last.t) << " s=" << io::format_double(last.s)
        << " m=" << io::format_double(last.m) << " K=" << io::format_double(last.K) << '\n'
        << "entry_time=" << io::format_optional(report.entry_time)
        << " clamp_count=" << traj.clamp_count
        << " m_law_residual=" << io::format_double(traj.m_law_residual) << '\n';
    return kOk;
}

int cmd_eigen(const GlobalOptions& global, const FlagOverrides& flags, bool write_phi,
              std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = materialize(layer_config(global, flags, Config{}));
    const ModelSetup setup = resolve(cfg);
    const NeumannLaplacian lap = build_laplacian(setup.grid);
    const EigenPair pair =
        principal_eigenpair(setup.sim.alpha, setup.sigma, setup.kin, setup.grid, lap, setup.eigen);
    const double k = k_functional(setup.grid, setup.kin.half_saturation(), pair.phi);

    const fs::path dir = global.out_dir;
    std::ostringstream row;
    io::write_eigen_row(row, pair, k);
    io::write_file(dir / "eigen.csv", row.str());
    if (write_phi) {
        std::ostringstream phi;
        io::write_profile(phi, setup.grid, pair.phi, "phi");
        io::write_file(dir / "phi.csv", phi.str());
    }
    write_manifest(dir, "eigen", cfg, seconds_since(start));
    out << row.str();
    return kOk;
}

int cmd_sweep(const GlobalOptions& global, const FlagOverrides& flags, SweepFamily family,
              std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    // Sweep reproductions default to the longer-run setup of the entry-time study.
    Config command_defaults;
    command_defaults.set("horizon", 60.0);
    command_defaults.set("alpha", 0.001);
    command_defaults.set("sweep_min", 0.0);
    command_defaults.set("sweep_count", family == SweepFamily::AuxostatIV ? 340.0 : 800.0);
    Config layered = layer_config(global, flags, command_defaults);
    if (!layered.has("sweep_max")) {
        const double s_in = layered.has("s_in") ? layered.number("s_in") : 35.0;
        layered.set("sweep_max", family == SweepFamily::AuxostatIV ? s_in : 8.0);
    }
    const Config cfg = materialize(layered);
    const ModelSetup setup = resolve(cfg);

    const SweepSpec spec{family,
                         open_interval_values(cfg.number("sweep_min"), cfg.number("sweep_max"),
                                              cfg.count("sweep_count")),
                         SweepBase{setup.sim, setup.kin, setup.grid, setup.init, setup.law.u_max,
                                   setup.law.clamp, setup.washout_threshold}};
    const SweepResult result = run_sweep(spec, global.workers);

    const fs::path dir = global.out_dir;
    std::ostringstream csv;
    io::write_sweep(csv, result);
    io::write_file(dir / "sweep.csv", csv.str());
    write_manifest(dir, family == SweepFamily::AuxostatIV ? "sweep-sigma" : "sweep-u", cfg,
                   seconds_since(start));

    for (const auto& row : result.rows) {
        if (row.failure) err << "param " << io::format_double(row.param) << " failed: " << *row.failure << '\n';
    }
    if (result.best) {
        out << "best," << io::format_double(result.best->first) << ','
            << io::format_double(result.best->second) << '\n';
    } else {
        out << "best,,\n";
    }
    return kOk;
}

int cmd_alpha_study(const GlobalOptions& global, const FlagOverrides& flags, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    Config command_defaults;
    command_defaults.set("alphas", std::vector<double>{0.0, 0.001, 0.005, 0.01});
    const Config cfg = materialize(layer_config(global, flags, command_defaults));
    const std::vector<double> alphas = cfg.numbers("alphas");
    if (alphas.empty()) throw ConfigError("alpha-study needs at least one alpha");
    for (double a : alphas) {
        if (!(a >= 0.0)) throw ConfigError("alpha-study: alphas must be >= 0");
    }
    const ModelSetup setup = resolve(cfg);

    std::vector<Trajectory> runs(alphas.size());
    parallel_for(alphas.size(), global.workers, [&](std::size_t i) {
        SimConfig sim = setup.sim;
        sim.alpha = alphas[i];
        sim.record_snapshots = false;
        runs[i] = simulate(sim, setup.law, setup.init, setup.kin, setup.grid);
    });

    const fs::path dir = global.out_dir;
    std::ostringstream combined;
    combined << 't';
    for (double a : alphas) combined << ",K_alpha_" << io::format_double(a, false);
    combined << '\n';
    for (std::size_t n = 0; n < runs.front().samples.size(); ++n) {
        combined << io::format_double(runs.front().samples[n].t);
        for (const auto& run : runs) combined << ',' << io::format_double(run.samples[n].K);
        combined << '\n';
    }
    io::write_file(dir / "alpha_study.csv", combined.str());

    for (std::size_t i = 0; i < alphas.size(); ++i) {
        std::ostringstream csv;
        csv << "t,K\n";
        for (const auto& s : runs[i].samples) {
            csv << io::format_double(s.t) << ',' << io::format_double(s.K) << '\n';
        }
        io::write_file(dir / ("k_vs_t_alpha_" + io::format_double(alphas[i], false) + ".csv"),
                       csv.str());
        const EntryReport report = entry_time(runs[i], setup.sim.k0);
        out << "alpha=" << io::format_double(alphas[i], false)
            << " entry_time=" << io::format_optional(report.entry_time)
            << " final_K=" << io::format_double(runs[i].samples.back().K) << '\n';
    }
    write_manifest(dir, "alpha-study", cfg, seconds_since(start));
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trait-structured chemostat simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    FlagOverrides flags;
    app.add_option("--config", global.config_path, "Flat key = value or JSON config file");
    app.add_option("--out", global.out_dir, "Output directory");
    app.add_option("--workers", global.workers, "Worker threads (0: all cores)");
    app.add_option("--set", global.assignments, "Override a config key: key=value");

    auto number_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                           const std::string& help) {
        sub->add_option_function<double>(
            flag, [&flags, key](double v) { flags.numbers[key] = v; }, help);
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "Run one trajectory");
    number_flag(simulate_cmd, "--alpha", "alpha", "Mutation rate");
    number_flag(simulate_cmd, "--sigma", "sigma", "Auxostat set-point");
    number_flag(simulate_cmd, "--horizon", "horizon", "Final time");

    bool write_phi = false;
    auto* eigen_cmd = app.add_subcommand("eigen", "Principal eigenpair and K[phi]");
    number_flag(eigen_cmd, "--alpha", "alpha", "Mutation rate");
    number_flag(eigen_cmd, "--sigma", "sigma", "Substrate set-point");
    number_flag(eigen_cmd, "--tol", "tol", "Eigenvalue tolerance");
    eigen_cmd->add_flag("--phi", write_phi, "Also write phi.csv");

    std::vector<CLI::App*> sweeps;
    for (const char* name : {"sweep-sigma", "sweep-u"}) {
        auto* sub = app.add_subcommand(name, std::string("Entry-time sweep (") + name + ")");
        number_flag(sub, "--min", "sweep_min", "Lower end of the open interval");
        number_flag(sub, "--max", "sweep_max", "Upper end of the open interval");
        number_flag(sub, "--count", "sweep_count", "Number of values");
        number_flag(sub, "--horizon", "horizon", "Final time");
        number_flag(sub, "--alpha", "alpha", "Mutation rate");
        sweeps.push_back(sub);
    }

    auto* alpha_cmd = app.add_subcommand("alpha-study", "K(t) for several mutation rates");
    std::vector<std::string> alpha_list;
    alpha_cmd->add_option("--alphas", alpha_list, "Comma-separated mutation rates")
        ->delimiter(',')
        ->expected(0, -1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    if (alpha_cmd->count("--alphas") > 0) {
        std::vector<double> values;
        for (const auto& item : alpha_list) {
            if (item.empty()) continue;
            double v = 0.0;
            const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc() || end != item.data() + item.size()) {
                err << "usage error: --alphas: '" << item << "' is not a number\n";
                return kUsage;
            }
            values.push_back(v);
        }
        flags.alphas = values;
    }

    try {
        if (*simulate_cmd) return cmd_simulate(global, flags, out);
        if (*eigen_cmd) return cmd_eigen(global, flags, write_phi, out);
        if (*sweeps[0]) return cmd_sweep(global, flags, SweepFamily::AuxostatIV, out, err);
        if (*sweeps[1]) return cmd_sweep(global, flags, SweepFamily::ConstantU, out, err);
        if (*alpha_cmd) return cmd_alpha_study(global, flags, out);
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ContractViolation& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsage;
}

}  // namespace chemostat::cli
