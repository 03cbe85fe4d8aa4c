#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace logfp {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"problem", {"kind", "d", "gamma", "sigma", "mode_k", "claim", "collision", "sigma_bar"}},
        {"grid", {"nx", "nv", "n_log", "n_uniform", "r_max", "r_inner", "X_max", "V_max"}},
        {"time", {"dt", "t_end", "t_first_sample", "n_samples", "sample_every"}},
        {"hypo", {"epsilon", "lambda_m", "k_moment"}},
        {"fit", {"window_lo", "window_hi", "expected_exponent", "tolerance"}},
        {"output", {"directory", "formats"}},
        {"run", {"seed", "trials"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void ExperimentConfig::check_known(const std::string& section, const std::string& key, int line) {
    const auto& sc = schema();
    auto it = sc.find(section);
    if (it == sc.end())
        throw ConfigError("config line " + std::to_string(line) + ": unknown section [" + section + "]");
    if (!key.empty() && !it->second.count(key))
        throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key +
                          "' in section [" + section + "]");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            check_known(section, "", lineno);
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        check_known(section, key, lineno);
        cfg.sections_[section][key] = val;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ExperimentConfig::set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
    const std::string section = trim(assignment.substr(0, dot));
    const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
    check_known(section, key, 0);
    sections_[section][key] = trim(assignment.substr(eq + 1));
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

bool ExperimentConfig::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

void ExperimentConfig::require_sections(const std::vector<std::string>& sections) const {
    for (const auto& s : sections)
        if (!has_section(s)) throw ConfigError("missing required config section [" + s + "]");
}

std::string ExperimentConfig::get_str(const std::string& section, const std::string& key,
                                      std::optional<std::string> fallback) const {
    auto it = sections_.find(section);
    if (it != sections_.end()) {
        auto kt = it->second.find(key);
        if (kt != it->second.end()) return kt->second;
    }
    if (fallback) return *fallback;
    throw ConfigError("missing config value [" + section + "] " + key);
}

double ExperimentConfig::get_num(const std::string& section, const std::string& key,
                                 std::optional<double> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config value [" + section + "] " + key);
    }
    const std::string v = get_str(section, key);
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config value [" + section + "] " + key + " = '" + v + "' is not a number");
    }
    if (pos != v.size())
        throw ConfigError("config value [" + section + "] " + key + " = '" + v + "' is not a number");
    return out;
}

long ExperimentConfig::get_int(const std::string& section, const std::string& key,
                               std::optional<long> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config value [" + section + "] " + key);
    }
    const double v = get_num(section, key);
    const long l = long(v);
    if (double(l) != v)
        throw ConfigError("config value [" + section + "] " + key + " must be an integer");
    return l;
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream ss;
    for (const auto& [sec, kv] : sections_) {
        ss << '[' << sec << "]\n";
        for (const auto& [k, v] : kv) ss << k << " = " << v << '\n';
    }
    return ss.str();
}

}  // namespace logfp
