#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "chemostat/dynamics.hpp"
#include "chemostat/grid.hpp"
#include "chemostat/search.hpp"
#include "chemostat/spectral.hpp"

namespace chemostat::io {

/// Shortest form that round-trips, or 17 significant digits when `full` is
/// set. Always '.' as decimal separator, never grouped.
std::string format_double(double value, bool full = true);

std::string format_optional(const std::optional<double>& value);

/// Columns t,s,m,u,K.
void write_trajectory(std::ostream& out, const Trajectory& traj);

/// Columns z,f (or z,<value_name>).
void write_profile(std::ostream& out, const TraitGrid& grid, std::span<const double> values,
                   const std::string& value_name = "f");

/// Snapshot file name for time t: f_<t>.csv.
std::string snapshot_filename(double t);

/// Columns param,entry_time,held,washout_time; absent values are empty.
void write_sweep(std::ostream& out, const SweepResult& result);

/// Header lambda1,K,residual,iterations and one row.
void write_eigen_row(std::ostream& out, const EigenPair& pair, double k_value);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace chemostat::io
