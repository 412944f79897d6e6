#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chemostat/controls.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"
#include "chemostat/spectral.hpp"
#include "chemostat/state.hpp"

namespace chemostat {

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;

/// Flat key/value configuration.
///
/// Text format, one entry per line, `#` starts a comment:
///
///     n_nodes = 5000
///     kinetics = "monod"
///     clamp = true
///     r_values = [1.0, 1.5, 2.0]
///
/// A JSON object with the same flat keys is accepted too, as is a run
/// manifest (its "config" member is used).
class Config {
public:
    static Config parse(std::string_view text, const std::string& source = "<string>");
    static Config parse_json(std::string_view text, const std::string& source = "<json>");
    static Config load(const std::filesystem::path& path);

    /// Parses `key=value` with the same value grammar as the text format.
    void set_from_string(std::string_view assignment);
    void set(const std::string& key, ConfigValue value);
    void erase(const std::string& key) { entries_.erase(key); }

    /// Entries of `overrides` replace ours.
    void merge(const Config& overrides);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    double number(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;

    const std::map<std::string, ConfigValue>& entries() const noexcept { return entries_; }

    /// Canonical text rendering (sorted keys, 17 significant digits).
    std::string to_text() const;

private:
    const ConfigValue& at(const std::string& key) const;
    std::map<std::string, ConfigValue> entries_;
};

/// Every recognized key with its default value. Keys without a default
/// (u_max, r_values, f0_values, switch_time, u_schedule_*) are absent.
Config default_config();

/// Keys the CLI accepts.
const std::vector<std::string>& known_config_keys();

/// The model assembled from a configuration.
struct ModelSetup {
    TraitGrid grid;
    Kinetics kin;
    KineticsBounds kinetics_bounds;
    SimConfig sim;
    ControlLaw law;
    SystemState init;
    double sigma = 0.0;
    double washout_threshold = 0.0;
    EigenOptions eigen;
};

/// Defaults < `cfg`. Throws ConfigError on unknown keys or invalid values.
ModelSetup resolve(const Config& cfg);

/// Copy of `cfg` layered over the defaults with derived values (u_max,
/// snapshot_every) written out, so that the result alone reproduces a run.
Config materialize(const Config& cfg);

}  // namespace chemostat
