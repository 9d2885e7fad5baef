#include "fitwave/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fitwave {

double RunConfig::w_value(int n) const {
    double base;
    if (w_preset == "sqrt_loglog")
        base = std::sqrt(std::log(std::log(double(n))));
    else if (w_preset == "cbrt_loglog")
        base = std::cbrt(std::log(std::log(double(n))));
    else if (w_preset == "const_one")
        base = 1.0;
    else
        throw std::invalid_argument("unknown w preset: " + w_preset);
    return base * w_scale;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not a number: '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': not a boolean: '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back((int)parse_number(key, item));
    }
    if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> unknown;
    std::string section;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument("malformed section line: " + line);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "scales" && section != "run" &&
                section != "experiment" && section != "output")
                unknown.push_back("[" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed config line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qualified = section + "." + key;

        if (section == "model") {
            if (key == "n") cfg.model.n = (int)parse_number(qualified, value);
            else if (key == "mu") cfg.model.mu = parse_number(qualified, value);
            else if (key == "q") cfg.model.q = parse_number(qualified, value);
            else if (key == "gamma") cfg.model.gamma = parse_number(qualified, value);
            else unknown.push_back(qualified);
        } else if (section == "scales") {
            if (key == "w_preset") cfg.w_preset = value;
            else if (key == "w_scale") cfg.w_scale = parse_number(qualified, value);
            else unknown.push_back(qualified);
        } else if (section == "run") {
            if (key == "t_end") {
                cfg.t_end = parse_number(qualified, value);
                cfg.t_end_set = true;
            } else if (key == "replicates") cfg.replicates = (std::size_t)parse_number(qualified, value);
            else if (key == "seed") cfg.seed = (std::uint64_t)parse_number(qualified, value);
            else if (key == "grid_points") cfg.grid_points = (std::size_t)parse_number(qualified, value);
            else if (key == "particle_cap") cfg.particle_cap = (std::uint64_t)parse_number(qualified, value);
            else if (key == "event_cap") cfg.event_cap = (std::uint64_t)parse_number(qualified, value);
            else if (key == "workers") cfg.workers = (int)parse_number(qualified, value);
            else unknown.push_back(qualified);
        } else if (section == "experiment") {
            if (key == "n_grid") cfg.n_grid = parse_int_list(qualified, value);
            else if (key == "profile") cfg.profile = value;
            else if (key == "w0") cfg.w0 = (std::int64_t)parse_number(qualified, value);
            else if (key == "labels") cfg.labels = parse_bool(qualified, value);
            else if (key == "set_threshold") {
                cfg.set_threshold = (std::int64_t)parse_number(qualified, value);
                cfg.track_set = true;
            } else if (key == "k") cfg.k = (int)parse_number(qualified, value);
            else if (key == "oracle_radius") cfg.oracle_radius = (std::int64_t)parse_number(qualified, value);
            else unknown.push_back(qualified);
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = value;
            else if (key == "format") {
                cfg.write_csv = value.find("csv") != std::string::npos;
                cfg.write_json = value.find("json") != std::string::npos;
                if (!cfg.write_csv && !cfg.write_json)
                    throw std::invalid_argument("output.format must mention csv and/or json");
            } else unknown.push_back(qualified);
        } else {
            unknown.push_back(qualified.empty() ? key : qualified);
        }
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw std::invalid_argument(msg);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << file.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace fitwave
