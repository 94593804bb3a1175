#pragma once

// Evaluation of y = f + h*f on a uniform grid. Inputs split into a finite train
// of Dirac atoms plus a regular (locally integrable) part; atoms pass through to
// the output unchanged and contribute w * h(t - t_a) to the smooth part in
// closed form, never through quadrature. The regular part is convolved either
//
//   - directly, panel by panel, pairing the one-sided limits of h across each
//     panel so the trapezoid rule stays second order at the staircase jumps, or
//   - through the unit-scale route: rescale f to the unit grid, convolve each
//     series term's gamma_n against it there, and combine with the beta weights.
//
// The two routes share only the kernel weights, so their agreement checks the
// whole assembly, not one code path against itself.

#include <cmath>
#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "exceptions.hpp"
#include "gamma.hpp"
#include "resolvent.hpp"

namespace volterra {

struct atom {
    double t = 0.0;
    double w = 0.0;
};

struct constant_signal {
    double c = 1.0;
};

// f(t) = 2 + sin t, handy as a smooth strictly positive test input.
struct two_plus_sin_signal {};

struct sampled_signal {
    double step = 0.0;
    std::vector<double> values;  // values at i*step; zero beyond the last sample
};

using regular_signal = std::variant<constant_signal, two_plus_sin_signal, sampled_signal>;

struct input_signal {
    std::vector<atom> atoms;
    regular_signal regular = constant_signal{0.0};
};

struct time_grid {
    double step = 0.0;
    int count = 0;
};

struct solution {
    std::vector<atom> atoms;  // the input atoms, passed through
    time_grid grid;
    std::vector<double> regular_samples;  // smooth part of y at i*step
};

inline void check_signal(const input_signal& sig) {
    double prev = -1.0;
    for (const atom& a : sig.atoms) {
        if (!(a.t >= 0.0) || !std::isfinite(a.t) || !std::isfinite(a.w))
            throw error("signal: atom times must be finite and >= 0, weights finite");
        if (!(a.t > prev)) throw error("signal: atom times must be strictly increasing");
        prev = a.t;
    }
    if (const auto* s = std::get_if<sampled_signal>(&sig.regular)) {
        if (!(s->step > 0.0)) throw error("signal: sampled step must be positive");
        for (double v : s->values)
            if (!std::isfinite(v)) throw error("signal: sample values must be finite");
    }
}

// Regular part at time t (0 for t < 0). Sampled signals are only defined on
// their own grid; off-node queries are refused rather than interpolated.
inline double signal_value(const regular_signal& reg, double t) {
    if (t < 0.0) return 0.0;
    if (const auto* c = std::get_if<constant_signal>(&reg)) return c->c;
    if (std::holds_alternative<two_plus_sin_signal>(reg)) return 2.0 + std::sin(t);
    const auto& s = std::get<sampled_signal>(reg);
    const double pos = t / s.step;
    const auto i = static_cast<long long>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(i)) > 1e-9 * (std::abs(pos) + 1.0))
        throw grid_mismatch("signal: query off the sample grid");
    if (i < 0 || static_cast<std::size_t>(i) >= s.values.size()) return 0.0;
    return s.values[static_cast<std::size_t>(i)];
}

// (S_delta f)(t) = f(t / delta) / delta; S_delta and S_{1/delta} invert each other.
inline std::function<double(double)> scale_signal(double delta,
                                                  std::function<double(double)> f) {
    if (!(delta > 0.0)) throw error("scale_signal: delta must be positive");
    return [delta, f = std::move(f)](double t) { return f(t / delta) / delta; };
}

namespace detail {

inline std::vector<double> sample_regular(const regular_signal& reg, const time_grid& grid) {
    if (const auto* s = std::get_if<sampled_signal>(&reg)) {
        if (std::abs(s->step - grid.step) > 1e-12 * grid.step)
            throw grid_mismatch("signal: sample step differs from solver grid step");
        std::vector<double> f(static_cast<std::size_t>(grid.count), 0.0);
        const std::size_t n =
            s->values.size() < f.size() ? s->values.size() : f.size();
        for (std::size_t i = 0; i < n; ++i) f[i] = s->values[i];
        return f;
    }
    std::vector<double> f(static_cast<std::size_t>(grid.count));
    for (int i = 0; i < grid.count; ++i)
        f[static_cast<std::size_t>(i)] = signal_value(reg, i * grid.step);
    return f;
}

}  // namespace detail

// Nominal accuracy scale of the grid quadrature; route-agreement checks are
// asserted against a small multiple of this.
inline double quadrature_tolerance(const time_grid& grid) { return grid.step * grid.step; }

// (h * f)(t_i) by panelwise trapezoid, using the right limit of h at each
// panel's left edge and the left limit at its right edge. At staircase jumps
// the two panels' errors then cancel to second order.
inline std::vector<double> convolve_direct(const resolvent& res,
                                           const std::vector<double>& f,
                                           const time_grid& grid) {
    const auto count = static_cast<std::size_t>(grid.count);
    std::vector<double> hr = res.eval_grid(grid.step, grid.count);
    std::vector<double> hl(count);
    for (std::size_t l = 0; l < count; ++l)
        hl[l] = hr[l] - res.jump_at(static_cast<double>(l) * grid.step);

    std::vector<double> out(count, 0.0);
    for (std::size_t i = 1; i < count; ++i) {
        double acc = 0.0;
        for (std::size_t l = 0; l < i; ++l)
            acc += hr[l] * f[i - l] + hl[l + 1] * f[i - l - 1];
        out[i] = 0.5 * grid.step * acc;
    }
    return out;
}

// Same convolution through the unit-scale series: needs the resolvent's delta
// to be an exact integer multiple of the grid step.
inline std::vector<double> convolve_gamma_route(const resolvent& res,
                                                const std::vector<double>& f,
                                                const time_grid& grid) {
    const double delta = res.delta();
    const double q_real = delta / grid.step;
    const double q_round = std::floor(q_real + 0.5);
    if (!(q_round >= 1.0) || delta != q_round * grid.step)
        throw grid_mismatch("gamma route: delta must be an integer multiple of step");
    const auto q = static_cast<long long>(q_round);
    const double su = grid.step / delta;  // unit-grid spacing
    const auto count = static_cast<std::size_t>(grid.count);
    const beta_triangle& tri = res.triangle();
    const gamma_evaluator& ge = *res.evaluator();

    // w = S_{1/delta} f on the unit grid; w(m*su) = delta * f(m*step) exactly.
    std::vector<double> w(count);
    for (std::size_t m = 0; m < count; ++m) w[m] = delta * f[m];

    std::vector<double> acc(count, 0.0);
    std::vector<double> qn(count);
    for (int n = 1; n <= tri.depth; ++n) {
        const auto& row = tri.rows[static_cast<std::size_t>(n - 1)];
        bool any = false;
        for (double b : row)
            if (b != 0.0) { any = true; break; }
        if (!any) continue;

        // qn[m] ~ (gamma_n * w)(m*su) on the unit grid.
        if (n == 1) {
            // gamma_1 is the indicator of [0,1): integrate w over [x-1, x] cap [0, inf).
            std::vector<double> prefix(count + 1, 0.0);  // trapezoid antiderivative
            for (std::size_t m = 1; m < count; ++m)
                prefix[m] = prefix[m - 1] + 0.5 * (w[m - 1] + w[m]);
            for (std::size_t m = 0; m < count; ++m) {
                const auto lo = static_cast<long long>(m) - q;
                qn[m] = su * (prefix[m] - (lo > 0 ? prefix[static_cast<std::size_t>(lo)] : 0.0));
            }
        } else {
            const long long support = static_cast<long long>(n) * q;  // tau < n
            const long long jmax = support - 1 < static_cast<long long>(count) - 1
                                       ? support - 1
                                       : static_cast<long long>(count) - 1;
            const std::vector<double>* grow = nullptr;  // gamma_n((j)*su), j = 1..jmax
            if (jmax >= 1) grow = &ge.row(n, su, su, static_cast<int>(jmax));
            for (std::size_t m = 0; m < count; ++m) {
                const long long mm = static_cast<long long>(m);
                const long long top = mm < support ? mm : support;
                double s = 0.0;
                for (long long j = 1; j < top; ++j)
                    s += (*grow)[static_cast<std::size_t>(j - 1)] *
                         w[m - static_cast<std::size_t>(j)];
                if (mm < support)  // truncation endpoint tau = x gets trapezoid half weight
                    s += 0.5 * ge(n, static_cast<double>(mm) * su) * w[0];
                qn[m] = su * s;
            }
        }

        for (int r = 0; r <= tri.max_shift; ++r) {
            const double b = row[static_cast<std::size_t>(r)];
            if (b == 0.0) continue;
            const long long base = static_cast<long long>(r) * q;
            if (base >= static_cast<long long>(count)) break;
            for (std::size_t m = static_cast<std::size_t>(base); m < count; ++m)
                acc[m] += b * qn[m - static_cast<std::size_t>(base)];
        }
    }
    for (double& v : acc) v /= delta;
    return acc;
}

inline time_grid default_grid(const resolvent& res) {
    time_grid g;
    g.step = res.delta();
    g.count = static_cast<int>(std::floor(res.horizon() / res.delta())) + 1;
    return g;
}

inline solution solve(const resolvent& res, const input_signal& sig, time_grid grid) {
    check_signal(sig);
    if (!(grid.step > 0.0) || grid.count < 1) throw error("solve: bad grid");

    solution out;
    out.atoms = sig.atoms;
    out.grid = grid;

    const std::vector<double> f = detail::sample_regular(sig.regular, grid);
    out.regular_samples = convolve_direct(res, f, grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.regular_samples[i] += f[i];

    // Atom responses in closed form: each contributes w * h(t - t_a).
    for (const atom& a : sig.atoms)
        for (int i = 0; i < grid.count; ++i) {
            const double t = i * grid.step - a.t;
            if (t >= 0.0) out.regular_samples[static_cast<std::size_t>(i)] += a.w * res.eval(t);
        }
    return out;
}

inline solution solve(const resolvent& res, const input_signal& sig) {
    return solve(res, sig, default_grid(res));
}

}  // namespace volterra
