#pragma once

// Resolvent h of y = f + g*y for a piecewise-constant kernel g_delta, assembled as
//
//   h_delta(t) = (1/delta) * sum_{n=1}^{N} sum_r beta^n_r gamma_n(t/delta - r)
//
// i.e. the series for the unit-step kernel with weights a_j = beta_j*delta,
// rescaled by (1/delta, t/delta). The depth N is chosen so that the dropped tail
// of the series is below a sup-norm bound:
//
//   || sum_{n>N} g^(*n) ||_inf  <=  sup(g) * k^N / (1 - k),   k = ||g||_1 < 1,
//
// which follows from ||phi*psi||_inf <= ||phi||_inf ||psi||_1 and ||g^(*n)||_1 = k^n.

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "exceptions.hpp"
#include "gamma.hpp"
#include "kernels.hpp"

namespace volterra {

class resolvent {
  public:
    // Depth ceiling for the tail-bound search; masses very close to 1 need more
    // terms than this and are rejected rather than silently truncated.
    static constexpr int max_depth = 10000;

    static resolvent build(const piecewise_kernel& pk, double horizon, double tol,
                           std::shared_ptr<gamma_evaluator> ge = nullptr) {
        if (!(horizon > 0.0)) throw error("resolvent: horizon must be positive");
        if (!(tol > 0.0)) throw error("resolvent: tol must be positive");
        if (pk.l1_mass() >= 1.0) throw mass_exceeds_one("resolvent: kernel mass >= 1");

        resolvent res;
        res.pk_ = pk;
        res.horizon_ = horizon;
        res.tol_ = tol;
        res.gamma_ = ge ? std::move(ge) : std::make_shared<gamma_evaluator>();
        res.twin_mutex_ = std::make_shared<std::mutex>();

        const double k = pk.l1_mass();
        const double gsup = pk.sup();
        int depth = 1;
        double tail = gsup == 0.0 ? 0.0 : gsup * k / (1.0 - k);
        while (tail > tol) {
            if (++depth > max_depth)
                throw tol_unreachable("resolvent: series depth ceiling reached; "
                                      "kernel mass too close to 1 for this tol");
            tail = gsup * std::pow(k, depth) / (1.0 - k);
        }
        res.tail_bound_sup_ = tail;

        std::vector<double> a(pk.betas.size());
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = pk.betas[j] * pk.delta;
        const int shifts = static_cast<int>(std::ceil(horizon / pk.delta));
        res.tri_ = build_triangle(std::move(a), depth, shifts);
        return res;
    }

    double delta() const { return pk_.delta; }
    double horizon() const { return horizon_; }
    double tol() const { return tol_; }
    int depth() const { return tri_.depth; }
    double tail_bound_sup() const { return tail_bound_sup_; }
    double k_eff() const { return tri_.k_eff; }
    const piecewise_kernel& kernel() const { return pk_; }
    const beta_triangle& triangle() const { return tri_; }
    const std::shared_ptr<gamma_evaluator>& evaluator() const { return gamma_; }

    // h_delta(t), right-continuous. 0 for t < 0; beyond the horizon the triangle
    // is truncated, so evaluation there is refused.
    double eval(double t) const {
        if (t < 0.0) return 0.0;
        check_horizon(t);
        const double u = t / pk_.delta;
        const int ju = static_cast<int>(std::floor(u));
        const int rmax = ju > tri_.max_shift ? tri_.max_shift : ju;

        // n = 1 contributes a_j * gamma_1(u - j), nonzero only for j = floor(u);
        // reading the weight directly keeps the jump binning identical to the
        // staircase kernel's own lookup.
        double acc = (ju >= 0 && ju <= tri_.max_shift &&
                      static_cast<std::size_t>(ju) < tri_.a.size())
                         ? tri_.a[static_cast<std::size_t>(ju)]
                         : 0.0;
        const gamma_evaluator& ge = *gamma_;
        for (int n = 2; n <= tri_.depth; ++n) {
            const auto& row = tri_.rows[static_cast<std::size_t>(n - 1)];
            const int rlo = ju - n + 1 > 0 ? ju - n + 1 : 0;
            for (int r = rlo; r <= rmax; ++r) {
                const double b = row[static_cast<std::size_t>(r)];
                if (b != 0.0) acc += b * ge(n, u - r);
            }
        }
        return acc / pk_.delta;
    }

    // Height change of h at t (nonzero only on exact bin edges, where the gamma_1
    // terms step from a_{j-1} to a_j).
    double jump_at(double t) const {
        return detail::staircase_jump(tri_.a, 1.0, t / pk_.delta) / pk_.delta;
    }

    double eval_left(double t) const { return eval(t) - jump_at(t); }
    double eval_mean(double t) const { return eval(t) - 0.5 * jump_at(t); }

    // Values at t_i = i*step, i = 0..count-1. When delta is an exact integer
    // multiple of step, every gamma_n is needed on one shared grid {m*step/delta}
    // and rows are fetched from the evaluator's memo; otherwise falls back to
    // pointwise evaluation.
    std::vector<double> eval_grid(double step, int count) const {
        if (!(step > 0.0) || count < 1) throw error("eval_grid: bad grid");
        check_horizon((count - 1) * step);
        std::vector<double> out(static_cast<std::size_t>(count), 0.0);

        const double q_real = pk_.delta / step;
        const double q_round = std::floor(q_real + 0.5);
        const bool aligned = q_round >= 1.0 && q_round <= 1e9 &&
                             pk_.delta == q_round * step;
        if (!aligned) {
            for (int i = 0; i < count; ++i)
                out[static_cast<std::size_t>(i)] = eval(i * step);
            return out;
        }

        const auto q = static_cast<long long>(q_round);
        const double su = step / pk_.delta;  // unit-scale spacing, 1/q up to rounding
        for (int i = 0; i < count; ++i) {
            const double u = (i * step) / pk_.delta;
            const int ju = static_cast<int>(std::floor(u));
            if (ju >= 0 && ju <= tri_.max_shift && static_cast<std::size_t>(ju) < tri_.a.size())
                out[static_cast<std::size_t>(i)] = tri_.a[static_cast<std::size_t>(ju)];
        }
        for (int n = 2; n <= tri_.depth; ++n) {
            const long long inner = static_cast<long long>(n) * q - 1;  // support points
            if (inner < 1) continue;
            const int len = static_cast<int>(inner < count ? inner : count);
            const auto& vals = gamma_->row(n, su, su, len);  // gamma_n((m+1)*su)
            const auto& row = tri_.rows[static_cast<std::size_t>(n - 1)];
            for (int r = 0; r <= tri_.max_shift; ++r) {
                const double b = row[static_cast<std::size_t>(r)];
                if (b == 0.0) continue;
                const long long base = static_cast<long long>(r) * q;
                if (base + 1 >= count) break;  // larger r only further out
                const long long mmax =
                    inner < static_cast<long long>(count) - 1 - base
                        ? inner
                        : static_cast<long long>(count) - 1 - base;
                for (long long m = 1; m <= mmax; ++m)
                    out[static_cast<std::size_t>(base + m)] +=
                        b * vals[static_cast<std::size_t>(m - 1)];
            }
        }
        for (double& v : out) v /= pk_.delta;
        return out;
    }

    // Two-path check of the rescaling law delta*h_delta(delta*t) = h_unit(t):
    // the left component goes through this resolvent, the right through an
    // independently built unit-step twin sharing nothing but the weights.
    std::pair<double, double> scaling_check(double t) const {
        {
            std::lock_guard<std::mutex> lock(*twin_mutex_);
            if (!twin_) {
                piecewise_kernel unit;
                unit.delta = 1.0;
                unit.betas = tri_.a;
                twin_ = std::make_shared<resolvent>(
                    build(unit, horizon_ / pk_.delta, tol_, gamma_));
            }
        }
        return {pk_.delta * eval(pk_.delta * t), twin_->eval(t)};
    }

  private:
    resolvent() = default;

    void check_horizon(double t) const {
        if (t > horizon_ * (1.0 + 1e-12) + 1e-12)
            throw out_of_horizon("resolvent: evaluation beyond build horizon");
    }

    piecewise_kernel pk_;
    double horizon_ = 0.0;
    double tol_ = 0.0;
    double tail_bound_sup_ = 0.0;
    beta_triangle tri_;
    std::shared_ptr<gamma_evaluator> gamma_;
    std::shared_ptr<std::mutex> twin_mutex_;
    mutable std::shared_ptr<resolvent> twin_;
};

}  // namespace volterra
