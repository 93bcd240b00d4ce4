#include <doctest.h>

#include <limits>
#include <stdexcept>
#include <string>

#include "ss2f/params.hpp"

using namespace ss2f;

namespace {

ParamVector truth() { return ParamVector::tied(1.5, 1.0, -2.0, 1.3, 0.3, -0.7, 0.0, 0.0, 0.03, 5); }

std::string violation(const ParamVector& p) {
    try {
        validate_params(p);
    } catch (const std::domain_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("tied builder replicates the noise sd") {
    const ParamVector p = truth();
    CHECK(p.n_contracts() == 5);
    for (double si : p.s) CHECK(si == 0.03);
    CHECK(p.kappa == 1.5);
    CHECK(p.rho == -0.7);
}

TEST_CASE("the true parameter vector is accepted") {
    const ParamVector p = truth();
    CHECK(&validate_params(p) == &p);
    CHECK(params_valid(p));
}

TEST_CASE("violations name the first offending constraint") {
    ParamVector p = truth();
    p.rho = 1.5;
    CHECK(violation(p).find("rho out of range") != std::string::npos);

    p = truth();
    p.kappa = 0.0;
    CHECK(violation(p).find("kappa must be positive") != std::string::npos);

    p = truth();
    p.gamma = -0.2;
    CHECK(violation(p).find("gamma") != std::string::npos);

    p = truth();
    p.sigma_chi = 0.0;
    CHECK(violation(p).find("sigma_chi") != std::string::npos);

    p = truth();
    p.sigma_xi = std::numeric_limits<double>::quiet_NaN();
    CHECK(violation(p).find("sigma_xi") != std::string::npos);

    p = truth();
    p.mu_xi = std::numeric_limits<double>::infinity();
    CHECK(violation(p).find("mu_xi") != std::string::npos);

    p = truth();
    p.lambda_chi = std::numeric_limits<double>::quiet_NaN();
    CHECK(violation(p).find("lambda_chi") != std::string::npos);

    p = truth();
    p.s[2] = -0.01;
    CHECK(violation(p).find("s[3]") != std::string::npos);

    p = truth();
    p.rho = -1.0;  // boundary is excluded
    CHECK(violation(p).find("rho") != std::string::npos);

    CHECK_FALSE(params_valid(p));
}

TEST_CASE("label switching exchanges the factor roles") {
    const ParamVector p = truth();
    const ParamVector q = label_switched(p);
    CHECK(q.kappa == p.gamma);
    CHECK(q.gamma == p.kappa);
    CHECK(q.sigma_chi == p.sigma_xi);
    CHECK(q.sigma_xi == p.sigma_chi);
    CHECK(q.lambda_chi == p.lambda_xi);
    CHECK(q.lambda_xi == p.lambda_chi);
    CHECK(q.rho == p.rho);
    CHECK(q.s == p.s);
    // The stationary level mu_xi / gamma is preserved.
    CHECK(q.mu_xi / q.gamma == doctest::Approx(p.mu_xi / p.gamma).epsilon(1e-15));
}

TEST_CASE("label switching is an involution") {
    const ParamVector p = truth();
    const ParamVector back = label_switched(label_switched(p));
    CHECK(back.kappa == doctest::Approx(p.kappa).epsilon(1e-15));
    CHECK(back.gamma == doctest::Approx(p.gamma).epsilon(1e-15));
    CHECK(back.mu_xi == doctest::Approx(p.mu_xi).epsilon(1e-15));
    CHECK(back.sigma_chi == p.sigma_chi);
    CHECK(back.sigma_xi == p.sigma_xi);
}

TEST_CASE("label switching at kappa == gamma is the identity") {
    ParamVector p = truth();
    p.kappa = p.gamma = 1.2;
    p.sigma_chi = p.sigma_xi = 0.5;
    p.lambda_chi = p.lambda_xi = 0.1;
    const ParamVector q = label_switched(p);
    CHECK(q.kappa == p.kappa);
    CHECK(q.mu_xi == doctest::Approx(p.mu_xi).epsilon(1e-15));
}
