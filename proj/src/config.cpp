#include "ergo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ergo/csv.hpp"

namespace ergo {

const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Check: return "check";
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Tv: return "tv";
    case ExperimentKind::Uniformity: return "uniformity";
    case ExperimentKind::Minorize: return "minorize";
    case ExperimentKind::Gap: return "gap";
    case ExperimentKind::Doeblin: return "doeblin";
    case ExperimentKind::Report: return "report";
    }
    return "check";
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::Check, ExperimentKind::Simulate, ExperimentKind::Moments,
                   ExperimentKind::Tv, ExperimentKind::Uniformity, ExperimentKind::Minorize,
                   ExperimentKind::Gap, ExperimentKind::Doeblin, ExperimentKind::Report}) {
        if (s == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown experiment kind: " + s);
}

ModelSpec RunConfig::to_model_spec() const {
    DriftPolynomial drift(drift_coeffs);
    CovarianceSpec cov;
    if (covariance == "identity") {
        cov = CovarianceSpec::identity();
    } else if (covariance == "power_law") {
        cov = CovarianceSpec::power_law(cov_scale, cov_exponent);
    } else if (covariance == "explicit") {
        cov = CovarianceSpec::explicit_values(cov_values);
    } else {
        throw std::invalid_argument("covariance: must be identity, power_law or explicit");
    }
    return ModelSpec(length, n_modes, n_colloc, std::move(drift), std::move(cov));
}

SimParams RunConfig::to_sim_params() const {
    SimParams p;
    p.dt = dt;
    p.t_end = t_end;
    p.seed = seed;
    p.noise_on = noise_on;
    if (record_times.empty()) {
        for (double t = 0.0; t <= t_end + 1e-12; t += 0.25) p.record_times.push_back(t);
    } else {
        p.record_times = record_times;
    }
    p.validate();
    return p;
}

CheckParams RunConfig::to_check_params() const {
    CheckParams c;
    c.alpha_exp = alpha_exp;
    c.hs_T = hs_t;
    c.epsilon = epsilon;
    c.s = s;
    c.box = box;
    c.grid_steps = grid_steps;
    c.gamma_series = gamma_series;
    c.e9_T = e9_t;
    c.quad_points = quad_points;
    c.d = d;
    if (window_a >= 0.0) c.window_a = window_a;
    if (window_b >= 0.0) c.window_b = window_b;
    return c;
}

Observable RunConfig::to_observable() const {
    if (projection == "sup") return Observable{0};
    if (projection.rfind("mode", 0) == 0) {
        const int m = std::atoi(projection.c_str() + 4);
        if (m >= 1 && m <= n_modes) return Observable{m};
    }
    throw std::invalid_argument("projection: expected sup or modeK with 1 <= K <= n_modes");
}

std::vector<double> RunConfig::resolved_magnitudes() const {
    if (!magnitudes.empty()) return magnitudes;
    if (experiment == ExperimentKind::Uniformity) return {10.0, 100.0, 1000.0};
    return {0.0, 10.0, 100.0, 1000.0};
}

std::vector<double> RunConfig::resolved_stress_magnitudes() const {
    if (!stress_magnitudes.empty()) return stress_magnitudes;
    return {0.0, 100.0, 10000.0};
}

namespace {

std::vector<double> parse_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(value);
    double v;
    while (ss >> v) out.push_back(v);
    if (!ss.eof()) throw std::invalid_argument(key + ": malformed numeric list");
    return out;
}

std::vector<double> parse_times(const std::string& value, const std::string& key) {
    const auto c1 = value.find(':');
    if (c1 == std::string::npos) return parse_list(value, key);
    const auto c2 = value.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument(key + ": expected start:step:stop");
    const double start = std::stod(value.substr(0, c1));
    const double step = std::stod(value.substr(c1 + 1, c2 - c1 - 1));
    const double stop = std::stod(value.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw std::invalid_argument(key + ": bad start:step:stop");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double t = start + step * static_cast<double>(i);
        if (t > stop + 1e-12) break;
        out.push_back(std::min(t, stop));
    }
    return out;
}

double parse_double(const std::string& value, const std::string& key) {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument(key + ": malformed number");
    return v;
}

int parse_int(const std::string& value, const std::string& key) {
    const double v = parse_double(value, key);
    if (v != std::floor(v)) throw std::invalid_argument(key + ": expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw std::invalid_argument(key + ": expected on/off");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool n_colloc_set = false;

    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad section");
            section = line.substr(1, line.size() - 2);
            if (section != "model" && section != "sim" && section != "experiment")
                throw std::invalid_argument("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("key '" + key + "' appears before any section header");

        if (section == "model") {
            if (key == "length") cfg.length = parse_double(value, key);
            else if (key == "n_modes") cfg.n_modes = parse_int(value, key);
            else if (key == "n_colloc") { cfg.n_colloc = parse_int(value, key); n_colloc_set = true; }
            else if (key == "drift_coeffs") cfg.drift_coeffs = parse_list(value, key);
            else if (key == "covariance") cfg.covariance = value;
            else if (key == "cov_scale") cfg.cov_scale = parse_double(value, key);
            else if (key == "cov_exponent") cfg.cov_exponent = parse_double(value, key);
            else if (key == "cov_values") cfg.cov_values = parse_list(value, key);
            else throw std::invalid_argument("unknown key '" + key + "' in [model]");
        } else if (section == "sim") {
            if (key == "dt") cfg.dt = parse_double(value, key);
            else if (key == "t_end") cfg.t_end = parse_double(value, key);
            else if (key == "record_times") cfg.record_times = parse_times(value, key);
            else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
            else if (key == "noise") cfg.noise_on = parse_bool(value, key);
            else if (key == "n_traj") cfg.n_traj = parse_int(value, key);
            else throw std::invalid_argument("unknown key '" + key + "' in [sim]");
        } else {
            if (key == "kind") cfg.experiment = experiment_from_string(value);
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "alpha_exp") cfg.alpha_exp = parse_double(value, key);
            else if (key == "hs_t") cfg.hs_t = parse_double(value, key);
            else if (key == "epsilon") cfg.epsilon = parse_double(value, key);
            else if (key == "s") cfg.s = parse_double(value, key);
            else if (key == "box") cfg.box = parse_double(value, key);
            else if (key == "grid_steps") cfg.grid_steps = parse_int(value, key);
            else if (key == "gamma_series") cfg.gamma_series = parse_double(value, key);
            else if (key == "e9_t") cfg.e9_t = parse_double(value, key);
            else if (key == "quad_points") cfg.quad_points = parse_int(value, key);
            else if (key == "d") cfg.d = parse_int(value, key);
            else if (key == "window_a") cfg.window_a = parse_double(value, key);
            else if (key == "window_b") cfg.window_b = parse_double(value, key);
            else if (key == "magnitudes") cfg.magnitudes = parse_list(value, key);
            else if (key == "x0_magnitude") cfg.x0_magnitude = parse_double(value, key);
            else if (key == "tv_magnitude") cfg.tv_magnitude = parse_double(value, key);
            else if (key == "bins") cfg.bins = parse_int(value, key);
            else if (key == "projection") cfg.projection = value;
            else if (key == "fit_t_min") cfg.fit_t_min = parse_double(value, key);
            else if (key == "fit_t_max") cfg.fit_t_max = parse_double(value, key);
            else if (key == "eps_level") cfg.eps_level = parse_double(value, key);
            else if (key == "stress_magnitudes") cfg.stress_magnitudes = parse_list(value, key);
            else if (key == "stress_rough") cfg.stress_rough = parse_bool(value, key);
            else if (key == "k_sup_radius") cfg.k_sup_radius = parse_double(value, key);
            else if (key == "k_sobolev_theta") cfg.k_sobolev_theta = parse_double(value, key);
            else if (key == "k_sobolev_radius") cfg.k_sobolev_radius = parse_double(value, key);
            else if (key == "t_probe") cfg.t_probe = parse_double(value, key);
            else if (key == "gap_burn_in") cfg.gap_burn_in = parse_double(value, key);
            else if (key == "gap_sample_dt") cfg.gap_sample_dt = parse_double(value, key);
            else if (key == "gap_n_samples") cfg.gap_n_samples = parse_int(value, key);
            else if (key == "doeblin_t_steps") cfg.doeblin_t_steps = parse_double(value, key);
            else if (key == "doeblin_m0") cfg.doeblin_m0 = parse_double(value, key);
            else throw std::invalid_argument("unknown key '" + key + "' in [experiment]");
        }
    }

    if (!n_colloc_set) cfg.n_colloc = 4 * cfg.n_modes;

    // Invariant validation with the offending key named.
    if (!(cfg.length > 0.0)) throw std::invalid_argument("length: must be > 0");
    if (cfg.n_modes < 1) throw std::invalid_argument("n_modes: must be >= 1");
    if (cfg.n_colloc < 2 * cfg.n_modes)
        throw std::invalid_argument("n_colloc: must be >= 2*n_modes (anti-aliasing)");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end: must be > 0");
    if (cfg.n_traj < 2) throw std::invalid_argument("n_traj: must be >= 2");
    if (cfg.bins < 8) throw std::invalid_argument("bins: must be >= 8");
    if (cfg.window_a >= 0.0 && cfg.window_b >= 0.0 && cfg.window_b > cfg.window_a)
        throw std::invalid_argument(
            "window_b: must satisfy b <= a (check_powerlaw_window precondition)");
    if (!(cfg.k_sobolev_theta > 0.5 && cfg.k_sobolev_theta < 1.0))
        throw std::invalid_argument("k_sobolev_theta: must lie in (1/2, 1)");
    if (cfg.experiment == ExperimentKind::Doeblin &&
        !(cfg.doeblin_m0 > 0.0 && cfg.doeblin_m0 < 1.0))
        throw std::invalid_argument("doeblin_m0: must lie in (0,1)");
    cfg.to_model_spec();  // surfaces drift/covariance violations early
    cfg.to_sim_params();

    return cfg;
}

namespace {

void emit_list(std::ostringstream& out, const char* key, const std::vector<double>& v) {
    out << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_double(v[i]);
    }
    out << '\n';
}

} // namespace

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[model]\n";
    out << "length = " << format_double(cfg.length) << '\n';
    out << "n_modes = " << cfg.n_modes << '\n';
    out << "n_colloc = " << cfg.n_colloc << '\n';
    emit_list(out, "drift_coeffs", cfg.drift_coeffs);
    out << "covariance = " << cfg.covariance << '\n';
    out << "cov_scale = " << format_double(cfg.cov_scale) << '\n';
    out << "cov_exponent = " << format_double(cfg.cov_exponent) << '\n';
    if (!cfg.cov_values.empty()) emit_list(out, "cov_values", cfg.cov_values);

    out << "\n[sim]\n";
    out << "dt = " << format_double(cfg.dt) << '\n';
    out << "t_end = " << format_double(cfg.t_end) << '\n';
    emit_list(out, "record_times", cfg.to_sim_params().record_times);
    out << "seed = " << cfg.seed << '\n';
    out << "noise = " << (cfg.noise_on ? "on" : "off") << '\n';
    out << "n_traj = " << cfg.n_traj << '\n';

    out << "\n[experiment]\n";
    out << "kind = " << to_string(cfg.experiment) << '\n';
    out << "output_dir = " << cfg.output_dir << '\n';
    out << "alpha_exp = " << format_double(cfg.alpha_exp) << '\n';
    out << "hs_t = " << format_double(cfg.hs_t) << '\n';
    out << "epsilon = " << format_double(cfg.epsilon) << '\n';
    out << "s = " << format_double(cfg.s) << '\n';
    out << "box = " << format_double(cfg.box) << '\n';
    out << "grid_steps = " << cfg.grid_steps << '\n';
    out << "gamma_series = " << format_double(cfg.gamma_series) << '\n';
    out << "e9_t = " << format_double(cfg.e9_t) << '\n';
    out << "quad_points = " << cfg.quad_points << '\n';
    out << "d = " << cfg.d << '\n';
    if (cfg.window_a >= 0.0) out << "window_a = " << format_double(cfg.window_a) << '\n';
    if (cfg.window_b >= 0.0) out << "window_b = " << format_double(cfg.window_b) << '\n';
    emit_list(out, "magnitudes", cfg.resolved_magnitudes());
    out << "x0_magnitude = " << format_double(cfg.x0_magnitude) << '\n';
    out << "tv_magnitude = " << format_double(cfg.tv_magnitude) << '\n';
    out << "bins = " << cfg.bins << '\n';
    out << "projection = " << cfg.projection << '\n';
    out << "fit_t_min = " << format_double(cfg.fit_t_min) << '\n';
    out << "fit_t_max = " << format_double(cfg.fit_t_max) << '\n';
    out << "eps_level = " << format_double(cfg.eps_level) << '\n';
    emit_list(out, "stress_magnitudes", cfg.resolved_stress_magnitudes());
    out << "stress_rough = " << (cfg.stress_rough ? "on" : "off") << '\n';
    out << "k_sup_radius = " << format_double(cfg.k_sup_radius) << '\n';
    out << "k_sobolev_theta = " << format_double(cfg.k_sobolev_theta) << '\n';
    out << "k_sobolev_radius = " << format_double(cfg.k_sobolev_radius) << '\n';
    out << "t_probe = " << format_double(cfg.t_probe) << '\n';
    out << "gap_burn_in = " << format_double(cfg.gap_burn_in) << '\n';
    out << "gap_sample_dt = " << format_double(cfg.gap_sample_dt) << '\n';
    out << "gap_n_samples = " << cfg.gap_n_samples << '\n';
    out << "doeblin_t_steps = " << format_double(cfg.doeblin_t_steps) << '\n';
    out << "doeblin_m0 = " << format_double(cfg.doeblin_m0) << '\n';
    return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return emit_config(a) == emit_config(b);
}

} // namespace ergo
