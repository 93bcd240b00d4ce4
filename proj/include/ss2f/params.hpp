#pragma once

#include <cstddef>
#include <vector>

namespace ss2f {

/// Full parameter vector of the two-factor commodity spot price model:
/// mean-reversion speeds, long-factor drift, volatilities, factor
/// correlation, market prices of risk, and per-contract measurement
/// noise standard deviations.
struct ParamVector {
    double kappa = 0.0;       // short-factor mean-reversion speed, 1/year
    double gamma = 0.0;       // long-factor mean-reversion speed, 1/year
    double mu_xi = 0.0;       // long-factor drift, log-price/year
    double sigma_chi = 0.0;   // short-factor volatility, log-price/sqrt(year)
    double sigma_xi = 0.0;    // long-factor volatility, log-price/sqrt(year)
    double rho = 0.0;         // factor correlation, in (-1, 1)
    double lambda_chi = 0.0;  // short-factor risk premium
    double lambda_xi = 0.0;   // long-factor risk premium
    std::vector<double> s;    // measurement noise sd per contract, log-price units

    int n_contracts() const { return static_cast<int>(s.size()); }

    /// Builds a vector with all contracts sharing one measurement noise sd.
    static ParamVector tied(double kappa, double gamma, double mu_xi,
                            double sigma_chi, double sigma_xi, double rho,
                            double lambda_chi, double lambda_xi,
                            double s, int n_contracts);
};

/// Checks every domain constraint (positive rates and volatilities,
/// correlation strictly inside (-1, 1), positive noise sds, finite drifts).
/// Returns the vector unchanged; throws std::domain_error naming the first
/// violated constraint. The identification constraint kappa >= gamma is a
/// property of estimation, not of the parameter domain, and is not checked
/// here.
const ParamVector& validate_params(const ParamVector& p);

/// True iff validate_params would accept p.
bool params_valid(const ParamVector& p);

/// The identification twin: exchanges the roles of the two factors
/// (kappa, sigma_chi, lambda_chi) <-> (gamma, sigma_xi, lambda_xi) and
/// rescales the drift so the implied distribution of observed futures
/// prices is unchanged. Filtering either parameterization yields the
/// same likelihood, which is why estimation imposes kappa >= gamma.
ParamVector label_switched(const ParamVector& p);

}  // namespace ss2f
