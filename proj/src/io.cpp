#include "chemostat/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chemostat/errors.hpp"

namespace chemostat::io {

std::string format_double(double value, bool full) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto result = full ? std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                             std::chars_format::general, 17)
                             : std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    out << "t,s,m,u,K\n";
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(s.s) << ',' << format_double(s.m) << ','
            << format_double(s.u) << ',' << format_double(s.K) << '\n';
    }
}

void write_profile(std::ostream& out, const TraitGrid& grid, std::span<const double> values,
                   const std::string& value_name) {
    if (values.size() != grid.n) throw ContractViolation("write_profile: length mismatch");
    out << "z," << value_name << '\n';
    for (std::size_t i = 0; i < grid.n; ++i) {
        out << format_double(grid.nodes[i]) << ',' << format_double(values[i]) << '\n';
    }
}

std::string snapshot_filename(double t) { return "f_" + format_double(t, false) + ".csv"; }

void write_sweep(std::ostream& out, const SweepResult& result) {
    out << "param,entry_time,held,washout_time\n";
    for (const auto& row : result.rows) {
        out << format_double(row.param) << ',' << format_optional(row.entry_time) << ','
            << (row.held ? "true" : "false") << ',' << format_optional(row.washout_time) << '\n';
    }
}

void write_eigen_row(std::ostream& out, const EigenPair& pair, double k_value) {
    out << "lambda1,K,residual,iterations\n"
        << format_double(pair.lambda1) << ',' << format_double(k_value) << ','
        << format_double(pair.residual) << ',' << pair.iterations << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace chemostat::io
