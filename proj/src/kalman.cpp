#include "ss2f/kalman.hpp"

#include <Eigen/Cholesky>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "ss2f/moments.hpp"

namespace ss2f {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_panel(const ParamVector& p, const ObservationPanel& panel, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("filter: dt must be > 0");
    if (panel.taus.rows() != panel.y.rows() || panel.taus.cols() != panel.y.cols())
        throw std::invalid_argument("filter: panel maturity matrix and price matrix disagree in shape");
    if (static_cast<Eigen::Index>(panel.times.size()) != panel.y.rows())
        throw std::invalid_argument("filter: panel has " + std::to_string(panel.times.size()) +
                                    " observation times for " + std::to_string(panel.y.rows()) +
                                    " price rows");
    if (p.n_contracts() != panel.contracts())
        throw std::invalid_argument("filter: parameter vector has " +
                                    std::to_string(p.n_contracts()) + " noise sds for " +
                                    std::to_string(panel.contracts()) + " contracts");
}

// Walks the panel date by date, rebuilding the observation system only when
// the maturity row or the missing-data pattern changes. With a constant
// schedule and complete data this costs one build for the whole pass.
class PanelCursor {
public:
    PanelCursor(const ParamVector& p, const ObservationPanel& panel)
        : p_(p), panel_(panel) {}

    const MeasurementSystem& advance(Eigen::Index j, Eigen::VectorXd& y_obs) {
        const int n = panel_.contracts();
        cols_.clear();
        for (int i = 0; i < n; ++i)
            if (!std::isnan(panel_.y(j, i))) cols_.push_back(i);

        const bool row_changed = !have_row_ || panel_.taus.row(j) != cached_row_;
        if (row_changed) {
            full_ = measurement_system(p_, panel_.taus.row(j).transpose());
            cached_row_ = panel_.taus.row(j);
            have_row_ = true;
        }

        y_obs.resize(static_cast<Eigen::Index>(cols_.size()));
        for (std::size_t q = 0; q < cols_.size(); ++q)
            y_obs[static_cast<Eigen::Index>(q)] = panel_.y(j, cols_[q]);

        if (static_cast<int>(cols_.size()) == n) return full_;

        if (row_changed || cols_ != cached_cols_) {
            const auto k = static_cast<Eigen::Index>(cols_.size());
            sub_.d.resize(k);
            sub_.F.resize(2, k);
            sub_.v.resize(k);
            sub_.maturities.resize(k);
            for (Eigen::Index q = 0; q < k; ++q) {
                const int c = cols_[static_cast<std::size_t>(q)];
                sub_.d[q] = full_.d[c];
                sub_.F.col(q) = full_.F.col(c);
                sub_.v[q] = full_.v[c];
                sub_.maturities[q] = full_.maturities[c];
            }
            cached_cols_ = cols_;
        }
        return sub_;
    }

    int observed() const { return static_cast<int>(cols_.size()); }

private:
    const ParamVector& p_;
    const ObservationPanel& panel_;
    MeasurementSystem full_, sub_;
    Eigen::RowVectorXd cached_row_;
    std::vector<int> cols_, cached_cols_;
    bool have_row_ = false;
};

}  // namespace

StepResult kf_step(const FilterState& prior, const TransitionSystem& trans,
                   const MeasurementSystem& meas, const Eigen::VectorXd& y,
                   CovUpdate update) {
    if (y.size() != meas.d.size())
        throw std::invalid_argument("kf_step: y has " + std::to_string(y.size()) +
                                    " entries but the observation system expects " +
                                    std::to_string(meas.d.size()));

    StepResult out;
    out.predicted.a = trans.c + trans.G * prior.a;
    const Eigen::Matrix2d Pp = trans.G * prior.P * trans.G.transpose() + trans.W;
    out.predicted.P = 0.5 * (Pp + Pp.transpose());

    if (y.size() == 0) {
        out.filtered = out.predicted;
        out.e.resize(0);
        out.L.resize(0, 0);
        out.l = 0.0;
        return out;
    }

    out.e = y - (meas.d + meas.F.transpose() * out.predicted.a);
    Eigen::MatrixXd L = meas.F.transpose() * (out.predicted.P * meas.F);
    L.diagonal() += meas.v;
    out.L = 0.5 * (L + L.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(out.L);
    if (llt.info() != Eigen::Success)
        throw FilterError("innovation covariance failed Cholesky factorization");

    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    out.l = -log_det - out.e.dot(llt.solve(out.e));

    const Eigen::MatrixXd K = llt.solve(meas.F.transpose() * out.predicted.P).transpose();
    out.filtered.a = out.predicted.a + K * out.e;
    if (update == CovUpdate::joseph) {
        const Eigen::Matrix2d ikf = Eigen::Matrix2d::Identity() - K * meas.F.transpose();
        const Eigen::Matrix2d P = ikf * out.predicted.P * ikf.transpose() +
                                  K * meas.v.asDiagonal() * K.transpose();
        out.filtered.P = 0.5 * (P + P.transpose());
    } else {
        const Eigen::Matrix2d P = out.predicted.P - K * (meas.F.transpose() * out.predicted.P);
        out.filtered.P = 0.5 * (P + P.transpose());
    }
    return out;
}

double FilterOutput::nll() const {
    return 0.5 * static_cast<double>(observation_count) * kLog2Pi - 0.5 * total_loglik;
}

FilterOutput kf_run(const ParamVector& p, const ObservationPanel& panel, double dt,
                    CovUpdate update) {
    validate_params(p);
    check_panel(p, panel, dt);

    const TransitionSystem trans = transition_system(p, dt);
    const auto [a0, P0] = stationary_moments(p);
    FilterState state{a0, P0};

    const Eigen::Index m = panel.dates();
    FilterOutput out;
    out.times = panel.times;
    out.a_pred.reserve(static_cast<std::size_t>(m));
    out.a_filt.reserve(static_cast<std::size_t>(m));
    out.P_pred.reserve(static_cast<std::size_t>(m));
    out.P_filt.reserve(static_cast<std::size_t>(m));
    out.innovations.reserve(static_cast<std::size_t>(m));
    out.innovation_covs.reserve(static_cast<std::size_t>(m));
    out.step_loglik.reserve(static_cast<std::size_t>(m));

    PanelCursor cursor(p, panel);
    Eigen::VectorXd y_obs;
    for (Eigen::Index j = 0; j < m; ++j) {
        const MeasurementSystem& meas = cursor.advance(j, y_obs);
        StepResult r;
        try {
            r = kf_step(state, trans, meas, y_obs, update);
        } catch (const FilterError& err) {
            throw FilterError(std::string(err.what()) + " at observation " +
                                  std::to_string(j + 1),
                              static_cast<int>(j + 1));
        }
        out.a_pred.push_back(r.predicted.a);
        out.a_filt.push_back(r.filtered.a);
        out.P_pred.push_back(r.predicted.P);
        out.P_filt.push_back(r.filtered.P);
        out.innovations.push_back(r.e);
        out.innovation_covs.push_back(r.L);
        out.step_loglik.push_back(r.l);
        out.total_loglik += r.l;
        out.observation_count += cursor.observed();
        state = r.filtered;
    }
    return out;
}

double neg_log_likelihood(const ParamVector& p, const ObservationPanel& panel, double dt) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!params_valid(p)) return inf;
    check_panel(p, panel, dt);

    const TransitionSystem trans = transition_system(p, dt);
    const auto [a0, P0] = stationary_moments(p);
    FilterState state{a0, P0};

    double total = 0.0;
    long count = 0;
    PanelCursor cursor(p, panel);
    Eigen::VectorXd y_obs;
    for (Eigen::Index j = 0; j < panel.dates(); ++j) {
        const MeasurementSystem& meas = cursor.advance(j, y_obs);
        StepResult r;
        try {
            r = kf_step(state, trans, meas, y_obs);
        } catch (const FilterError&) {
            return inf;
        }
        total += r.l;
        count += cursor.observed();
        state = r.filtered;
    }
    const double nll = 0.5 * static_cast<double>(count) * kLog2Pi - 0.5 * total;
    return std::isfinite(nll) ? nll : inf;
}

ConfidenceBands state_confidence_band(const FilterOutput& out, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("state_confidence_band: level must lie in (0, 1)");

    const boost::math::normal_distribution<double> unit;
    ConfidenceBands b;
    b.level = level;
    b.z = boost::math::quantile(unit, 0.5 + 0.5 * level);
    b.times = out.times;

    const std::size_t m = out.times.size();
    b.chi_hat.resize(m);
    b.chi_lo.resize(m);
    b.chi_hi.resize(m);
    b.xi_hat.resize(m);
    b.xi_lo.resize(m);
    b.xi_hi.resize(m);
    b.spot_hat.resize(m);
    b.spot_lo.resize(m);
    b.spot_hi.resize(m);

    for (std::size_t k = 0; k < m; ++k) {
        const Eigen::Vector2d& a = out.a_filt[k];
        const Eigen::Matrix2d& P = out.P_filt[k];
        const double sd_chi = std::sqrt(std::max(P(0, 0), 0.0));
        const double sd_xi = std::sqrt(std::max(P(1, 1), 0.0));
        const double log_spot = a[0] + a[1];
        const double sd_log_spot =
            std::sqrt(std::max(P(0, 0) + P(1, 1) + 2.0 * P(0, 1), 0.0));

        b.chi_hat[k] = a[0];
        b.chi_lo[k] = a[0] - b.z * sd_chi;
        b.chi_hi[k] = a[0] + b.z * sd_chi;
        b.xi_hat[k] = a[1];
        b.xi_lo[k] = a[1] - b.z * sd_xi;
        b.xi_hi[k] = a[1] + b.z * sd_xi;
        b.spot_hat[k] = std::exp(log_spot);
        b.spot_lo[k] = std::exp(log_spot - b.z * sd_log_spot);
        b.spot_hi[k] = std::exp(log_spot + b.z * sd_log_spot);
    }
    return b;
}

}  // namespace ss2f
