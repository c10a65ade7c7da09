#include "helispin/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string_view>
#include <thread>

#include "helispin/errors.hpp"

namespace helispin {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

double to_double(const std::string& value, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw DomainError("config key '" + key + "': cannot parse number '" + value + "'");
    return out;
}

int to_int(const std::string& value, const std::string& key) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw DomainError("config key '" + key + "': cannot parse integer '" + value + "'");
    return out;
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw DomainError("config key '" + key + "': cannot parse boolean '" + value + "'");
}

}  // namespace

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line is not key=value: '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "b0") config.b0 = to_double(value, key);
        else if (key == "phi") config.phi = to_double(value, key);
        else if (key == "L" || key == "pitch") config.pitch = to_double(value, key);
        else if (key == "v" || key == "velocity") config.velocity = to_double(value, key);
        else if (key == "kappa") config.kappa = to_double(value, key);
        else if (key == "turns") config.turns = to_int(value, key);
        else if (key == "steps") config.steps_per_turn = to_int(value, key);
        else if (key == "tolerance") config.tolerance = to_double(value, key);
        else if (key == "phi-min") config.phi_min = to_double(value, key);
        else if (key == "phi-max") config.phi_max = to_double(value, key);
        else if (key == "phi-points") config.phi_points = to_int(value, key);
        else if (key == "numeric") config.numeric_points = to_bool(value, key);
        else if (key == "kind") config.sweep_kind = value;
        else if (key == "scan") config.scan = value;
        else if (key == "scan-min") config.scan_min = to_double(value, key);
        else if (key == "scan-max") config.scan_max = to_double(value, key);
        else if (key == "scan-points") config.scan_points = to_int(value, key);
        else if (key == "output") config.output = value;
        else if (key == "jobs") config.jobs = to_int(value, key);
        else if (key == "degrees") config.degrees = to_bool(value, key);
        else if (key == "data") config.data_path = value;
        else if (key == "scale") config.overlay_scale = value;
        else throw DomainError("unknown config key '" + key + "'");
    }
}

void RunConfig::finalize() {
    if (degrees) {
        const double to_rad = kPi / 180.0;
        phi *= to_rad;
        phi_min *= to_rad;
        phi_max *= to_rad;
        degrees = false;
    }
    if (jobs == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        jobs = hw > 0 ? static_cast<int>(hw) : 1;
    }
    if (jobs < 1) throw DomainError("jobs must be >= 1");
    if (phi_points < 1) throw DomainError("phi-points must be >= 1");
    if (!(phi_min >= 0.0 && phi_max <= kPi && phi_min <= phi_max))
        throw DomainError("phi range must satisfy 0 <= phi-min <= phi-max <= pi");
    if (sweep_kind != "phase" && sweep_kind != "polarization")
        throw DomainError("sweep kind must be 'phase' or 'polarization'");
    if (scan != "phi" && scan != "b0" && scan != "v")
        throw DomainError("scan must be 'phi', 'b0' or 'v'");
    if (scan != "phi") {
        if (scan_points < 1) throw DomainError("scan-points must be >= 1 for b0/v scans");
        if (!(scan_min > 0.0 && scan_max >= scan_min))
            throw DomainError("scan range must satisfy 0 < scan-min <= scan-max");
    }
    if (overlay_scale != "1" && overlay_scale != "0.5" && overlay_scale != "both")
        throw DomainError("overlay scale must be '1', '0.5' or 'both'");
    if (!(perturb_field >= 0.0)) throw DomainError("perturb-field must be >= 0");
    params().validate();
}

HelicalFieldParams RunConfig::params() const {
    return HelicalFieldParams{b0, phi, pitch, velocity, kappa, turns};
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig config;
    config.base = params();
    if (phi_points == 1 && phi_min == phi_max)
        config.phi_grid = {phi_min};
    else
        config.phi_grid = SweepConfig::linspace(phi_min, phi_max, phi_points);
    config.steps_per_turn = steps_per_turn;
    config.numeric_points = numeric_points;
    config.jobs = jobs;
    if (scan != "phi" && scan_points >= 1)
        config.scan_values = SweepConfig::linspace(scan_min, scan_max, scan_points);
    return config;
}

}  // namespace helispin
