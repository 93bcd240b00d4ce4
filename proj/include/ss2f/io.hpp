#pragma once

#include <filesystem>
#include <vector>

#include "ss2f/estimate.hpp"
#include "ss2f/kalman.hpp"
#include "ss2f/params.hpp"
#include "ss2f/rng.hpp"
#include "ss2f/simulate.hpp"

namespace ss2f::io {

// states.csv: t, chi, xi
void write_states_csv(const StatePath& path, const std::filesystem::path& file);
StatePath read_states_csv(const std::filesystem::path& file);

// panel.csv: t, tau_1..tau_n, y_1..y_n
void write_panel_csv(const ObservationPanel& panel, const std::filesystem::path& file);
ObservationPanel read_panel_csv(const std::filesystem::path& file);

// filter_output.csv: t, a_chi, a_xi, P_chichi, P_chixi, P_xixi, e_1..e_n, l
void write_filter_csv(const FilterOutput& out, const std::filesystem::path& file);

/// Provenance sidecar for a simulated data set: parameters, step width,
/// seed/stream, and schedule settings.
void write_meta_json(const ParamVector& p, const SimConfig& cfg, RngSeed seed,
                     const std::filesystem::path& file);

void write_theta_json(const ParamVector& p, const std::filesystem::path& file);
ParamVector read_theta_json(const std::filesystem::path& file);

void write_estimate_json(const EstimationResult& r, const std::filesystem::path& file);
EstimationResult read_estimate_json(const std::filesystem::path& file);

/// One estimate in the layout of the headline results table:
/// n, kappa, gamma, mu, sigma_chi, sigma_xi, rho, s, nll.
struct ResultRow {
    long n_t = 0;
    ParamVector theta;
    double nll = 0.0;
};
void write_results_table_csv(const std::vector<ResultRow>& rows,
                             const std::filesystem::path& file);

/// Grid-search winners in the same parameter order, without the nll column.
void write_initial_values_csv(const std::vector<ResultRow>& rows,
                              const std::filesystem::path& file);

// errors.csv: n_t, replication, param, error (theta_hat - theta_true, NaN
// for failed runs)
void write_errors_csv(const std::vector<StudyRun>& runs, const ParamVector& theta_true,
                      const std::filesystem::path& file);

// bands.csv: t, chi_true, chi_hat, chi_lo, chi_hi, xi_true, ..., S_true, ...
void write_bands_csv(const StatePath& truth, const ConfidenceBands& bands,
                     const std::filesystem::path& file);

}  // namespace ss2f::io
