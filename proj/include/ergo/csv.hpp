#pragma once

#include <string>
#include <vector>

#include "ergo/sim.hpp"

namespace ergo {

/// Shortest exact decimal for a double (17 significant digits round-trip).
std::string format_double(double v);

/// One CSV file: header row then numeric rows, every value via format_double.
/// Output is byte-identical across runs for identical inputs.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Snapshot dump with header traj_id,time,coeff_1..coeff_N.
void write_snapshot_csv(const std::string& path, const Ensemble& ensemble);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace ergo
