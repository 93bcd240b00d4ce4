#include "ss2f/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ss2f {

ParamVector ParamVector::tied(double kappa, double gamma, double mu_xi,
                              double sigma_chi, double sigma_xi, double rho,
                              double lambda_chi, double lambda_xi,
                              double s, int n_contracts) {
    ParamVector p;
    p.kappa = kappa;
    p.gamma = gamma;
    p.mu_xi = mu_xi;
    p.sigma_chi = sigma_chi;
    p.sigma_xi = sigma_xi;
    p.rho = rho;
    p.lambda_chi = lambda_chi;
    p.lambda_xi = lambda_xi;
    p.s.assign(static_cast<std::size_t>(n_contracts < 0 ? 0 : n_contracts), s);
    return p;
}

const ParamVector& validate_params(const ParamVector& p) {
    // !(x > 0) also rejects NaN.
    if (!(p.kappa > 0.0) || !std::isfinite(p.kappa))
        throw std::domain_error("kappa must be positive and finite");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
        throw std::domain_error("gamma must be positive and finite");
    if (!std::isfinite(p.mu_xi))
        throw std::domain_error("mu_xi must be finite");
    if (!(p.sigma_chi > 0.0) || !std::isfinite(p.sigma_chi))
        throw std::domain_error("sigma_chi must be positive and finite");
    if (!(p.sigma_xi > 0.0) || !std::isfinite(p.sigma_xi))
        throw std::domain_error("sigma_xi must be positive and finite");
    if (!(p.rho > -1.0 && p.rho < 1.0))
        throw std::domain_error("rho out of range (-1, 1)");
    if (!std::isfinite(p.lambda_chi))
        throw std::domain_error("lambda_chi must be finite");
    if (!std::isfinite(p.lambda_xi))
        throw std::domain_error("lambda_xi must be finite");
    for (std::size_t i = 0; i < p.s.size(); ++i) {
        if (!(p.s[i] > 0.0) || !std::isfinite(p.s[i]))
            throw std::domain_error("s[" + std::to_string(i + 1) + "] must be positive and finite");
    }
    return p;
}

bool params_valid(const ParamVector& p) {
    try {
        validate_params(p);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

ParamVector label_switched(const ParamVector& p) {
    ParamVector q = p;
    q.kappa = p.gamma;
    q.gamma = p.kappa;
    q.sigma_chi = p.sigma_xi;
    q.sigma_xi = p.sigma_chi;
    q.lambda_chi = p.lambda_xi;
    q.lambda_xi = p.lambda_chi;
    // The long factor's stationary level mu_xi/gamma must survive the swap.
    q.mu_xi = p.mu_xi * p.kappa / p.gamma;
    return q;
}

}  // namespace ss2f
