#pragma once

// Richardson-style comparison of a built resolvent against the independent
// quadrature solver. The oracle's trapezoid error is O(step^2) on each panel
// once the kernel is sampled with the mean (Darboux) convention at its jumps,
// so running it at step and step/2 separates the true disagreement from the
// quadrature's own bias:
//
//   d(s) ~ A + C s^2,   A_est = (4 d(s/2) - d(s)) / 3,
//                       C_est = 4 (d(s) - d(s/2)) / (3 s^2).
//
// A_est must stay within the certificate budget, and d(s) itself within the
// budget plus the fitted quadrature term (with headroom on the fit constant).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "kernels.hpp"
#include "oracle.hpp"
#include "resolvent.hpp"

namespace volterra {

struct validation_report {
    double step = 0.0;
    double max_diff = 0.0;       // sup_i |oracle - pipeline| at step
    double max_diff_half = 0.0;  // same at step/2
    double l1_diff = 0.0;        // trapezoid L1 of the step-grid discrepancy
    double a_est = 0.0;
    double c_est = 0.0;
    double budget = 0.0;  // certificate + tol
    bool pass = false;
};

namespace detail {

// Staircase sampler for the oracle: mean values at interior jump nodes keep
// the trapezoid rule second order there; t = 0 is a domain edge, not a jump,
// so the right limit is the value that belongs to the integral.
inline std::function<double(double)> oracle_kernel_callable(const piecewise_kernel& pk) {
    return [pk](double t) { return t == 0.0 ? pk.value(0.0) : pk.value_mean(t); };
}

inline double max_abs_diff_vs_oracle(const resolvent& res, const quadrature_solution& sol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const double t = sol.time_at(i);
        const double mine = i == 0 ? res.eval(0.0) : res.eval_mean(t);
        worst = std::max(worst, std::abs(sol.samples[i] - mine));
    }
    return worst;
}

inline double l1_diff_vs_oracle(const resolvent& res, const quadrature_solution& sol) {
    std::vector<double> d(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const double t = sol.time_at(i);
        const double mine = i == 0 ? res.eval(0.0) : res.eval_mean(t);
        d[i] = std::abs(sol.samples[i] - mine);
    }
    return trapezoid_mass(d, sol.step);
}

}  // namespace detail

inline validation_report validate_against_oracle(const resolvent& res,
                                                 double certificate_bound, double step) {
    if (!(step > 0.0)) throw error("validate: step must be positive");
    const auto g = detail::oracle_kernel_callable(res.kernel());
    const double horizon = res.horizon();

    const quadrature_solution coarse = solve_volterra_direct(g, step, horizon);
    const quadrature_solution fine = solve_volterra_direct(g, step / 2.0, horizon);

    validation_report rep;
    rep.step = step;
    rep.max_diff = detail::max_abs_diff_vs_oracle(res, coarse);
    rep.max_diff_half = detail::max_abs_diff_vs_oracle(res, fine);
    rep.l1_diff = detail::l1_diff_vs_oracle(res, coarse);
    rep.a_est = std::max(0.0, (4.0 * rep.max_diff_half - rep.max_diff) / 3.0);
    rep.c_est = std::max(0.0, 4.0 * (rep.max_diff - rep.max_diff_half) / (3.0 * step * step));
    rep.budget = certificate_bound + res.tol();
    const double slack = 1e-9;
    rep.pass = rep.a_est <= rep.budget + slack &&
               rep.max_diff <= rep.budget + 1.5 * rep.c_est * step * step + slack;
    return rep;
}

}  // namespace volterra
