#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace logfp {

static const char* kVersion = "logfp 0.1.0";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void write_series_csv(const std::string& path, const std::map<std::string, DecaySeries>& series) {
    std::ofstream out = open_out(path);
    out << "time,value,series_name\n";
    for (const auto& [name, s] : series)
        for (std::size_t i = 0; i < s.size(); ++i)
            out << format_double(s.times[i]) << ',' << format_double(s.values[i]) << ',' << name << '\n';
}

void write_kinetic_csv(const std::string& path, const KineticTrajectory& traj) {
    std::ofstream out = open_out(path);
    out << "time,H,D,micro,macro_pair,mass,J2,K2,l2_norm\n";
    const auto& s = traj.series;
    auto col = [&](const char* key, std::size_t i) { return format_double(s.at(key).values[i]); };
    const std::size_t n = s.count("H") ? s.at("H").size() : 0;
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(s.at("H").times[i]) << ',' << col("H", i) << ',' << col("D", i) << ','
            << col("micro", i) << ',' << col("macro_pair", i) << ',' << col("mass", i) << ','
            << col("J2", i) << ',' << col("K2", i) << ',' << col("l2_norm", i) << '\n';
    }
}

void write_spectral_csv(const std::string& path, const std::vector<SpectralRow>& rows) {
    std::ofstream out = open_out(path);
    out << "d,gamma,sigma,mode,index,eigenvalue,tail_diag\n";
    for (const auto& r : rows)
        out << r.d << ',' << format_double(r.gamma) << ',' << format_double(r.sigma) << ',' << r.mode
            << ',' << r.index << ',' << format_double(r.eigenvalue) << ','
            << format_double(r.tail_diag) << '\n';
}

void write_snapshot(const std::string& path, const PhaseField& f) {
    std::ofstream out = open_out(path);
    const PhaseGrid& g = *f.grid;
    out << g.nx() << ' ' << g.nv() << ' ' << format_double(g.X_max) << ' '
        << format_double(g.V_max) << '\n';
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.nv(); ++j) {
            if (j) out << ' ';
            out << format_double(f.at(i, j));
        }
        out << '\n';
    }
}

PhaseField read_snapshot(const std::string& path, PhaseGrid& grid_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    std::size_t nx, nv;
    double X_max, V_max;
    if (!(in >> nx >> nv >> X_max >> V_max))
        throw std::runtime_error("snapshot header malformed in " + path);
    grid_out = PhaseGrid::make(nx, nv, X_max, V_max);
    PhaseField f(grid_out);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nv; ++j)
            if (!(in >> f.at(i, j))) throw std::runtime_error("snapshot data truncated in " + path);
    return f;
}

void write_estimates_json(const std::string& path, const std::vector<InequalityEstimate>& estimates) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : estimates) {
        nlohmann::json params;
        for (const auto& [k, v] : e.params) params[k] = v;
        arr.push_back({{"name", inequality_name(e.name)},
                       {"params", params},
                       {"constant", e.constant},
                       {"direction", e.direction == EnvelopeDirection::UpperEnvelope
                                         ? "UpperEnvelope"
                                         : "LowerEnvelope"},
                       {"optimizer", e.optimizer},
                       {"trials", e.trials},
                       {"worst_margin", e.worst_margin}});
    }
    open_out(path) << arr.dump(2) << '\n';
}

void write_manifest(const std::string& path, const std::string& config_text, double wall_seconds) {
    nlohmann::json j{{"version", kVersion}, {"config", config_text}, {"wall_time_s", wall_seconds}};
    open_out(path) << j.dump(2) << '\n';
}

}  // namespace logfp
