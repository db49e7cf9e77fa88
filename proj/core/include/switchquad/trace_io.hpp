#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "switchquad/simulation.hpp"

namespace switchquad::io {

/// Header row of the trace CSV for `mode_count` modes.
std::string trace_header(std::size_t mode_count);

/// One row per record, 17 significant digits, sigma reported 1-based.
void write_trace_csv(std::ostream& out, const sim::SimTrace& trace);

/// Plot-ready CSV files, one per figure:
///   errors.csv       t, e_z, e_phi_deg, e_theta_deg, e_psi_deg
///   gains_mode{m}.csv t, active, thetahat0..3, zeta, gamma
///   switching.csv    t, sigma (only at changes, plus the endpoints)
///   disturbance.csv  t, d0..d3
/// Returns the written paths.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir,
                                                   const sim::SimTrace& trace);

}  // namespace switchquad::io
