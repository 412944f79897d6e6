#include "chemostat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chemostat/errors.hpp"
#include "chemostat/io.hpp"

namespace chemostat {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

ConfigValue parse_value(std::string_view raw, const std::string& where) {
    const std::string_view s = trim(raw);
    if (s.empty()) throw ConfigError(where + ": missing value");
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ConfigError(where + ": unterminated string");
        return std::string(s.substr(1, s.size() - 2));
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError(where + ": unterminated list");
        std::vector<double> values;
        std::string_view body = trim(s.substr(1, s.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const std::string_view item = trim(body.substr(0, comma));
            if (!item.empty()) {
                const auto v = parse_number(item);
                if (!v) throw ConfigError(where + ": list entry '" + std::string(item) + "' is not a number");
                values.push_back(*v);
            }
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return values;
    }
    if (const auto v = parse_number(s)) return *v;
    return std::string(s);
}

ConfigValue from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::vector<double> values;
        for (const auto& item : j) {
            if (!item.is_number()) throw ConfigError(where + ": list entries must be numbers");
            values.push_back(item.get<double>());
        }
        return values;
    }
    throw ConfigError(where + ": unsupported value type");
}

std::string render(const ConfigValue& v) {
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* d = std::get_if<double>(&v)) return io::format_double(*d);
    if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
    const auto& list = std::get<std::vector<double>>(v);
    std::string out = "[";
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i > 0) out += ", ";
        out += io::format_double(list[i]);
    }
    return out + "]";
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::string pending;
    std::size_t pending_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (!pending.empty()) {
            pending += " " + line;
            if (line.find(']') == std::string::npos) continue;
            line = pending;
            pending.clear();
        } else if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(pending_line ? pending_line : line_no);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string_view rhs = trim(std::string_view(line).substr(eq + 1));
        if (!rhs.empty() && rhs.front() == '[' && rhs.find(']') == std::string_view::npos) {
            pending = line;
            pending_line = line_no;
            continue;
        }
        pending_line = 0;
        const std::string key(trim(std::string_view(line).substr(0, eq)));
        if (key.empty()) throw ConfigError(where + ": empty key");
        cfg.entries_[key] = parse_value(rhs, where);
    }
    if (!pending.empty()) throw ConfigError(source + ": unterminated list");
    return cfg;
}

Config Config::parse_json(std::string_view text, const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
    if (!doc.is_object()) throw ConfigError(source + ": expected a JSON object");
    Config cfg;
    for (const auto& [key, value] : doc.items()) {
        cfg.entries_[key] = from_json(value, source + ": key '" + key + "'");
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') return parse_json(text, path.string());
    return parse(text, path.string());
}

void Config::set_from_string(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    }
    const std::string key(trim(assignment.substr(0, eq)));
    if (key.empty()) throw ConfigError("override has an empty key");
    entries_[key] = parse_value(assignment.substr(eq + 1), "override " + key);
}

void Config::set(const std::string& key, ConfigValue value) { entries_[key] = std::move(value); }

void Config::merge(const Config& overrides) {
    for (const auto& [key, value] : overrides.entries_) entries_[key] = value;
}

const ConfigValue& Config::at(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const {
    const auto& v = at(key);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw ConfigError("config key '" + key + "' must be a number");
}

std::size_t Config::count(const std::string& key) const {
    const double v = number(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

const std::string& Config::text(const std::string& key) const {
    const auto& v = at(key);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw ConfigError("config key '" + key + "' must be a string");
}

bool Config::flag(const std::string& key) const {
    const auto& v = at(key);
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw ConfigError("config key '" + key + "' must be true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
    const auto& v = at(key);
    if (const auto* list = std::get_if<std::vector<double>>(&v)) return *list;
    if (const auto* d = std::get_if<double>(&v)) return {*d};
    throw ConfigError("config key '" + key + "' must be a list of numbers");
}

std::string Config::to_text() const {
    std::string out;
    for (const auto& [key, value] : entries_) out += key + " = " + render(value) + "\n";
    return out;
}

Config default_config() {
    Config cfg;
    cfg.set("z_min", 1.0);
    cfg.set("z_max", 3.0);
    cfg.set("n_nodes", 5000.0);
    cfg.set("kinetics", std::string("monod"));
    cfg.set("bar_mu", 1.0);
    cfg.set("r_profile", std::string("linear"));
    cfg.set("control", std::string("auxostat_iv"));
    cfg.set("u_value", 0.0);
    cfg.set("sigma", 9.0);
    cfg.set("clamp", true);
    cfg.set("alpha", 0.005);
    cfg.set("s_in", 35.0);
    cfg.set("dt", 0.01);
    cfg.set("horizon", 100.0);
    cfg.set("s0", 5.0);
    cfg.set("f0", std::string("constant:5"));
    cfg.set("snapshot_every", 0.0);
    cfg.set("k0", 1.5);
    cfg.set("washout_threshold", 1e-6);
    cfg.set("tol", 1e-10);
    cfg.set("max_iter", 200000.0);
    return cfg;
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "z_min", "z_max", "n_nodes", "kinetics", "bar_mu", "r_profile", "r_values",
        "control", "u_value", "u_schedule_times", "u_schedule_values", "sigma", "u_max",
        "clamp", "switch_time", "alpha", "s_in", "dt", "horizon", "s0", "f0", "f0_values",
        "snapshot_every", "k0", "washout_threshold", "tol", "max_iter", "alphas",
        "sweep_min", "sweep_max", "sweep_count"};
    return keys;
}

namespace {

Config layered(const Config& cfg) {
    const auto& keys = known_config_keys();
    for (const auto& [key, value] : cfg.entries()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    Config full = default_config();
    full.merge(cfg);
    return full;
}

ControlLaw build_law(const Config& cfg, double upsilon) {
    const std::string& kind = cfg.text("control");
    ControlLaw law;
    if (kind == "constant") {
        law = ControlLaw::constant(cfg.number("u_value"));
    } else if (kind == "piecewise") {
        law = ControlLaw::piecewise(cfg.has("u_schedule_times") ? cfg.numbers("u_schedule_times")
                                                                : std::vector<double>{},
                                    cfg.numbers("u_schedule_values"));
    } else if (kind == "auxostat_i" || kind == "auxostat_ii" || kind == "auxostat_iii" ||
               kind == "auxostat_iv") {
        const std::string suffix = kind.substr(std::string("auxostat_").size());
        const AuxostatVariant variant = suffix == "i"     ? AuxostatVariant::I
                                        : suffix == "ii"  ? AuxostatVariant::II
                                        : suffix == "iii" ? AuxostatVariant::III
                                                          : AuxostatVariant::IV;
        law = ControlLaw::auxostat(variant, cfg.number("sigma"));
    } else if (kind == "composite") {
        std::optional<double> t0;
        if (cfg.has("switch_time")) t0 = cfg.number("switch_time");
        law = ControlLaw::composite(ControlLaw::constant(upsilon),
                                    ControlLaw::auxostat(AuxostatVariant::IV, cfg.number("sigma")),
                                    t0);
    } else {
        throw ConfigError("unknown control '" + kind + "'");
    }
    if (cfg.has("u_max")) law.u_max = cfg.number("u_max");
    law.clamp = cfg.flag("clamp");
    return law;
}

std::vector<double> initial_density(const Config& cfg, std::size_t n) {
    if (cfg.has("f0_values")) {
        std::vector<double> f = cfg.numbers("f0_values");
        if (f.size() != n) {
            throw ConfigError("f0_values has " + std::to_string(f.size()) + " entries, expected " +
                              std::to_string(n) + " (n_nodes)");
        }
        return f;
    }
    const std::string& spec = cfg.text("f0");
    const std::string prefix = "constant:";
    if (spec.rfind(prefix, 0) != 0) {
        throw ConfigError("f0 must be 'constant:<value>' or use f0_values");
    }
    const auto v = parse_number(std::string_view(spec).substr(prefix.size()));
    if (!v) throw ConfigError("f0: '" + spec + "' has no numeric value");
    return std::vector<double>(n, *v);
}

}  // namespace

ModelSetup resolve(const Config& input) {
    const Config cfg = layered(input);

    const std::size_t n = cfg.count("n_nodes");
    TraitGrid grid = build_grid(cfg.number("z_min"), cfg.number("z_max"), n);

    if (cfg.text("kinetics") != "monod") {
        throw ConfigError("unsupported kinetics '" + cfg.text("kinetics") + "' (only monod)");
    }
    std::vector<double> r;
    if (cfg.has("r_values")) {
        r = cfg.numbers("r_values");
        if (r.size() != n) {
            throw ConfigError("r_values has " + std::to_string(r.size()) + " entries, expected " +
                              std::to_string(n) + " (n_nodes)");
        }
    } else if (cfg.text("r_profile") == "linear") {
        r = grid.nodes;
    } else {
        throw ConfigError("unknown r_profile '" + cfg.text("r_profile") + "'");
    }
    Kinetics kin = Kinetics::monod(cfg.number("bar_mu"), std::move(r));

    SimConfig sim;
    sim.alpha = cfg.number("alpha");
    sim.s_in = cfg.number("s_in");
    sim.dt = cfg.number("dt");
    sim.horizon = cfg.number("horizon");
    sim.snapshot_every = cfg.count("snapshot_every");
    sim.k0 = cfg.number("k0");
    sim.validate();

    const KineticsBounds kb = bounds(kin, sim.s_in, grid);
    ControlLaw law = build_law(cfg, kb.upsilon);
    law.validate(sim.s_in);

    SystemState init = SystemState::make(0.0, cfg.number("s0"), initial_density(cfg, n), grid);

    EigenOptions eig;
    eig.tol = cfg.number("tol");
    eig.max_iter = cfg.count("max_iter");

    const double washout = cfg.number("washout_threshold");
    const double sigma = cfg.number("sigma");
    return ModelSetup{std::move(grid), std::move(kin), kb,     sim, std::move(law),
                      std::move(init), sigma,          washout, eig};
}

Config materialize(const Config& input) {
    Config cfg = layered(input);
    const ModelSetup setup = resolve(input);
    if (!cfg.has("u_max")) cfg.set("u_max", setup.kinetics_bounds.u_bar);
    if (cfg.count("snapshot_every") == 0) {
        cfg.set("snapshot_every",
                static_cast<double>(std::max<std::size_t>(1, setup.sim.step_count() / 10)));
    }
    return cfg;
}

}  // namespace chemostat
