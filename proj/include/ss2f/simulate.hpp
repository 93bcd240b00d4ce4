#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "ss2f/moments.hpp"
#include "ss2f/params.hpp"
#include "ss2f/rng.hpp"

namespace ss2f {

/// Uniformly spaced latent state path, index k at time k*dt. Entry 0 is the
/// initial state; observations attach to entries 1..n_steps.
struct StatePath {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<StateVec> states;

    std::size_t size() const { return states.size(); }
};

/// Per observation date, the times-to-maturity of the n contracts observed
/// on that date. Row j corresponds to observation date (j+1)*dt.
struct MaturitySchedule {
    Eigen::MatrixXd taus;  // dates x contracts

    int contracts() const { return static_cast<int>(taus.cols()); }
    Eigen::Index dates() const { return taus.rows(); }

    /// True when every date carries the same maturity vector.
    bool constant() const;
};

/// Observed log futures prices: one row per observation date, one column
/// per contract, with the matching maturity matrix. NaN entries mark
/// missing observations.
struct ObservationPanel {
    std::vector<double> times;  // observation dates
    Eigen::MatrixXd taus;       // dates x contracts
    Eigen::MatrixXd y;          // dates x contracts, log futures prices

    int contracts() const { return static_cast<int>(y.cols()); }
    Eigen::Index dates() const { return y.rows(); }
};

/// Simulates the exact AR(1) recursion x_k = c + G x_{k-1} + w_k from x0,
/// drawing w_k through the lower-triangular factor of W. The returned path
/// has n_steps + 1 entries (x0 first). Throws if W fails to factorize,
/// which signals an invalid parameter vector.
StatePath simulate_states(const ParamVector& p, const StateVec& x0, double dt,
                          int n_steps, RngSeed seed);

/// Draws x0 from the stationary law N(a0, P0).
StateVec draw_stationary_state(const ParamVector& p, NormalRng& rng);

/// Builds the maturity schedule for observation dates 1..n_steps. In
/// constant mode every date carries (spacing, 2*spacing, ..., n*spacing).
/// In rolling mode each slot holds a calendar maturity that decays with t
/// and rolls forward by n*spacing at expiry; rows stay sorted ascending and
/// every tau stays positive.
MaturitySchedule make_maturity_schedule(int n_contracts, double spacing,
                                        int n_steps, double dt, bool rolling);

/// Generates y_t = d_t + F_t' x_t + v_t along the path for each scheduled
/// date, with v_t independent across dates and contracts. The schedule must
/// have exactly path.size() - 1 rows (one per post-initial state).
ObservationPanel simulate_observations(const ParamVector& p, const StatePath& path,
                                       const MaturitySchedule& schedule, RngSeed seed);

/// Spot price S_t = exp(chi_t + xi_t) along a path.
std::vector<double> spot_from_states(const StatePath& path);

/// Everything needed to produce one synthetic data set.
struct SimConfig {
    double dt = 1.0 / 360.0;
    int n_steps = 2000;
    int contracts = 5;
    double spacing = 1.0 / 12.0;
    bool rolling = false;
    bool fixed_x0 = false;  // when false, x0 ~ N(a0, P0)
    StateVec x0;            // used only when fixed_x0
};

/// Simulates a path and its observation panel. State noise uses the given
/// stream, measurement noise stream + 1 and the stationary x0 draw (when
/// fixed_x0 is off) stream + 2.
std::pair<StatePath, ObservationPanel> simulate_panel(const ParamVector& p,
                                                      const SimConfig& cfg,
                                                      RngSeed seed);

}  // namespace ss2f
