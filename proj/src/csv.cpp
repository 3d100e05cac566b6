#include "ergo/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergo {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
}

void write_snapshot_csv(const std::string& path, const Ensemble& ensemble) {
    auto out = open_out(path);
    const std::size_t n_modes =
        ensemble.snaps.empty() || ensemble.snaps[0].empty() ? 0 : ensemble.snaps[0][0].size();
    out << "traj_id,time";
    for (std::size_t k = 1; k <= n_modes; ++k) out << ",coeff_" << k;
    out << '\n';
    for (std::size_t i = 0; i < ensemble.traj_seeds.size(); ++i) {
        const auto valid = static_cast<std::size_t>(ensemble.valid_times[i]);
        for (std::size_t t = 0; t < valid; ++t) {
            out << i << ',' << format_double(ensemble.times[t]);
            for (double c : ensemble.snaps[t][i].coeffs) out << ',' << format_double(c);
            out << '\n';
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

} // namespace ergo
