#pragma once

#include <map>
#include <string>
#include <vector>

#include "grids.hpp"
#include "inequalities.hpp"
#include "kinetic.hpp"
#include "rates.hpp"
#include "spectral.hpp"

namespace logfp {

/// CSV with columns time,value,series_name (one block per series, %.17g).
void write_series_csv(const std::string& path, const std::map<std::string, DecaySeries>& series);

/// CSV with columns time,H,D,micro,macro_pair,mass,J2,K2,l2_norm.
void write_kinetic_csv(const std::string& path, const KineticTrajectory& traj);

struct SpectralRow {
    int d;
    double gamma, sigma;
    int mode, index;
    double eigenvalue, tail_diag;
};
/// CSV with columns d,gamma,sigma,mode,index,eigenvalue,tail_diag.
void write_spectral_csv(const std::string& path, const std::vector<SpectralRow>& rows);

/// Text matrix snapshot with one-line header "nx nv X_max V_max".
void write_snapshot(const std::string& path, const PhaseField& f);
PhaseField read_snapshot(const std::string& path, PhaseGrid& grid_out);

/// JSON records {name, params, constant, direction, trials, worst_margin}.
void write_estimates_json(const std::string& path, const std::vector<InequalityEstimate>& estimates);

/// Run manifest: config copy, code version, wall time.
void write_manifest(const std::string& path, const std::string& config_text, double wall_seconds);

std::string format_double(double v);  // shortest round-trip-stable decimal

}  // namespace logfp
