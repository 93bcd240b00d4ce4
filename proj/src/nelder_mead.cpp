#include "ss2f/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ss2f {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
    const Eigen::Index d = x0.size();
    if (d < 1) throw std::invalid_argument("nelder_mead: x0 must have at least one coordinate");
    if (opts.max_iterations < 1)
        throw std::invalid_argument("nelder_mead: max_iterations must be >= 1");
    if (!(opts.initial_step > 0.0))
        throw std::invalid_argument("nelder_mead: initial_step must be > 0");

    NelderMeadResult res;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    const std::size_t m = static_cast<std::size_t>(d) + 1;
    std::vector<Eigen::VectorXd> verts(m, x0);
    std::vector<double> fv(m);
    for (std::size_t i = 1; i < m; ++i) verts[i][static_cast<Eigen::Index>(i) - 1] += opts.initial_step;
    for (std::size_t i = 0; i < m; ++i) fv[i] = eval(verts[i]);

    std::vector<std::size_t> order(m);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        sort_simplex();
        const std::size_t best = order[0];
        const std::size_t worst = order[m - 1];
        const std::size_t second_worst = order[m - 2];

        double spread_x = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            spread_x = std::max(spread_x, (verts[i] - verts[best]).lpNorm<Eigen::Infinity>());
        const double spread_f = std::isfinite(fv[worst]) && std::isfinite(fv[best])
                                    ? fv[worst] - fv[best]
                                    : std::numeric_limits<double>::infinity();
        if (spread_f <= opts.f_tol && spread_x <= opts.x_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i < m; ++i)
            if (i != worst) centroid += verts[i];
        centroid /= static_cast<double>(d);

        const Eigen::VectorXd reflected = centroid + kReflect * (centroid - verts[worst]);
        const double f_ref = eval(reflected);

        if (f_ref < fv[best]) {
            const Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
            const double f_exp = eval(expanded);
            if (f_exp < f_ref) {
                verts[worst] = expanded;
                fv[worst] = f_exp;
            } else {
                verts[worst] = reflected;
                fv[worst] = f_ref;
            }
            continue;
        }
        if (f_ref < fv[second_worst]) {
            verts[worst] = reflected;
            fv[worst] = f_ref;
            continue;
        }

        // Contract toward the better of the worst vertex and its reflection.
        const bool outside = f_ref < fv[worst];
        Eigen::VectorXd contracted;
        if (outside)
            contracted = centroid + kContract * (reflected - centroid);
        else
            contracted = centroid - kContract * (centroid - verts[worst]);
        const double f_con = eval(contracted);
        if (f_con < std::min(f_ref, fv[worst])) {
            verts[worst] = contracted;
            fv[worst] = f_con;
            continue;
        }

        for (std::size_t i = 0; i < m; ++i) {
            if (i == best) continue;
            verts[i] = verts[best] + kShrink * (verts[i] - verts[best]);
            fv[i] = eval(verts[i]);
        }
    }

    sort_simplex();
    res.x = verts[order[0]];
    res.f = fv[order[0]];
    return res;
}

}  // namespace ss2f
