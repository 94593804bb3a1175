#pragma once

// Excitation kernel families g with branching mass k = ||g||_1 < 1, their pointwise
// evaluation, and the reduction to the piecewise-constant form the core algorithm
// consumes: g_delta(t) = beta_j on [j*delta, (j+1)*delta) with beta_j = g(j*delta).

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "exceptions.hpp"

namespace volterra {

struct exponential_kernel {
    double k;      // branching mass
    double theta;  // rate
};

struct power_law_kernel {
    double k;
    double theta;  // tail exponent
    double c;      // offset
};

struct rayleigh_kernel {
    double k;
    double sigma;  // scale
};

struct constant_unit_kernel {
    double k;  // height on [0,1)
};

struct tabulated_kernel {
    double delta;
    std::vector<double> betas;
};

using kernel_spec = std::variant<exponential_kernel, power_law_kernel, rayleigh_kernel,
                                 constant_unit_kernel, tabulated_kernel>;

inline void check_invariants(const kernel_spec& spec) {
    const auto need = [](bool ok, const char* what) {
        if (!ok) throw error(std::string("kernel_spec: ") + what);
    };
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, tabulated_kernel>) {
                need(g.delta > 0.0, "delta must be positive");
                double mass = 0.0;
                for (double b : g.betas) {
                    need(b >= 0.0 && std::isfinite(b), "betas must be finite and >= 0");
                    mass += b;
                }
                if (g.delta * mass >= 1.0)
                    throw mass_exceeds_one("kernel_spec: tabulated mass >= 1");
            } else {
                need(g.k > 0.0 && g.k < 1.0, "k must lie strictly in (0,1)");
                if constexpr (std::is_same_v<T, exponential_kernel>)
                    need(g.theta > 0.0, "theta must be positive");
                if constexpr (std::is_same_v<T, power_law_kernel>) {
                    need(g.theta > 0.0, "theta must be positive");
                    need(g.c > 0.0, "c must be positive");
                }
                if constexpr (std::is_same_v<T, rayleigh_kernel>)
                    need(g.sigma > 0.0, "sigma must be positive");
            }
        },
        spec);
}

namespace detail {

// Staircase lookup shared by tabulated kernels and piecewise_kernel. The bin index
// floor(t/delta) is the single binning expression used everywhere; evaluating the
// kernel and evaluating the resolvent must agree bit-for-bit on which side of a
// jump any given t falls.
inline double staircase_value(const std::vector<double>& betas, double delta, double t) {
    if (t < 0.0) return 0.0;
    const double u = t / delta;
    if (u >= static_cast<double>(betas.size())) return 0.0;
    const auto j = static_cast<std::size_t>(u);
    return j < betas.size() ? betas[j] : 0.0;
}

// Height change at t when t sits exactly on a bin edge, else 0.
inline double staircase_jump(const std::vector<double>& betas, double delta, double t) {
    if (t < 0.0) return 0.0;
    const double u = t / delta;
    const double fl = std::floor(u);
    if (u != fl) return 0.0;
    const auto j = static_cast<long long>(fl);
    const double here =
        (j >= 0 && j < static_cast<long long>(betas.size())) ? betas[static_cast<std::size_t>(j)] : 0.0;
    const double before = (j >= 1 && j - 1 < static_cast<long long>(betas.size()))
                              ? betas[static_cast<std::size_t>(j - 1)]
                              : 0.0;
    return here - before;
}

}  // namespace detail

// g(t), right-continuous, 0 for t < 0.
inline double evaluate(const kernel_spec& spec, double t) {
    if (t < 0.0) return 0.0;
    return std::visit(
        [&](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, exponential_kernel>)
                return g.k * g.theta * std::exp(-g.theta * t);
            else if constexpr (std::is_same_v<T, power_law_kernel>)
                return g.k * g.theta * std::pow(g.c, g.theta) / std::pow(g.c + t, 1.0 + g.theta);
            else if constexpr (std::is_same_v<T, rayleigh_kernel>)
                return g.k * t / (g.sigma * g.sigma) * std::exp(-t * t / (2.0 * g.sigma * g.sigma));
            else if constexpr (std::is_same_v<T, constant_unit_kernel>)
                return t < 1.0 ? g.k : 0.0;
            else
                return detail::staircase_value(g.betas, g.delta, t);
        },
        spec);
}

// Left limit g(t-); differs from evaluate only at staircase edges.
inline double evaluate_left(const kernel_spec& spec, double t) {
    double v = evaluate(spec, t);
    if (const auto* tab = std::get_if<tabulated_kernel>(&spec))
        v -= detail::staircase_jump(tab->betas, tab->delta, t);
    else if (const auto* cu = std::get_if<constant_unit_kernel>(&spec)) {
        if (t == 0.0) v -= cu->k;
        if (t == 1.0) v += cu->k;
    }
    return v;
}

// Mean of the one-sided limits. This is the sample value under which trapezoidal
// quadrature of a staircase stays second order; smooth kernels are unaffected.
inline double evaluate_mean(const kernel_spec& spec, double t) {
    return 0.5 * (evaluate(spec, t) + evaluate_left(spec, t));
}

// ||g||_1 of the full (untruncated) kernel.
inline double l1_mass(const kernel_spec& spec) {
    return std::visit(
        [](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, tabulated_kernel>) {
                double s = 0.0;
                for (double b : g.betas) s += b;
                return g.delta * s;
            } else {
                return g.k;  // each parametric family integrates to k
            }
        },
        spec);
}

// The exact input of the core algorithm: heights beta_j on steps of width delta.
struct piecewise_kernel {
    double delta = 1.0;
    std::vector<double> betas;

    double l1_mass() const {
        double s = 0.0;
        for (double b : betas) s += b;
        return delta * s;
    }

    double sup() const {
        double m = 0.0;
        for (double b : betas) m = b > m ? b : m;
        return m;
    }

    double value(double t) const { return detail::staircase_value(betas, delta, t); }
    double value_left(double t) const {
        return value(t) - detail::staircase_jump(betas, delta, t);
    }
    double value_mean(double t) const {
        return value(t) - 0.5 * detail::staircase_jump(betas, delta, t);
    }
};

// Left-endpoint sampling beta_j = g(j*delta) for j = 0..ceil(horizon/delta).
// For staircase inputs the result is an exact re-binning or an error: sampling a
// staircase whose edges do not line up with the new bins would silently misplace
// mass, so those cases throw instead.
inline piecewise_kernel discretize(const kernel_spec& spec, double delta, double horizon) {
    if (!(delta > 0.0) || !(horizon > 0.0))
        throw error("discretize: delta and horizon must be positive");
    check_invariants(spec);
    const auto count = static_cast<std::size_t>(std::ceil(horizon / delta)) + 1;

    piecewise_kernel pk;
    pk.delta = delta;
    pk.betas.resize(count);

    if (const auto* tab = std::get_if<tabulated_kernel>(&spec)) {
        // Exact refinement requires the requested step to divide the source step.
        const double ratio = tab->delta / delta;
        const double rq = std::floor(ratio + 0.5);
        if (rq < 1.0 || std::abs(ratio - rq) > 1e-9 * ratio)
            throw incompatible_step("discretize: tabulated step is not a multiple of delta");
        const auto q = static_cast<std::size_t>(rq);
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t src = j / q;
            pk.betas[j] = src < tab->betas.size() ? tab->betas[src] : 0.0;
        }
    } else if (const auto* cu = std::get_if<constant_unit_kernel>(&spec)) {
        const double ratio = 1.0 / delta;
        const double rq = std::floor(ratio + 0.5);
        if (rq < 1.0 || std::abs(ratio - rq) > 1e-9 * ratio)
            throw incompatible_step("discretize: delta does not divide the unit support");
        const auto q = static_cast<std::size_t>(rq);
        for (std::size_t j = 0; j < count; ++j) pk.betas[j] = j < q ? cu->k : 0.0;
    } else {
        for (std::size_t j = 0; j < count; ++j)
            pk.betas[j] = evaluate(spec, static_cast<double>(j) * delta);
    }

    if (pk.l1_mass() >= 1.0)
        throw mass_exceeds_one(
            "discretize: left-endpoint sampling pushed the kernel mass to >= 1; "
            "decrease delta");
    return pk;
}

// Rigorous bound on ||g - g_delta||_inf for left-endpoint sampling, linear in delta.
// Each bound is delta times a sup-norm bound on |g'|.
inline double sup_discretization_error(const kernel_spec& spec, double delta) {
    if (!(delta > 0.0)) throw error("sup_discretization_error: delta must be positive");
    return std::visit(
        [&](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, exponential_kernel>)
                return g.k * g.theta * g.theta * delta;
            else if constexpr (std::is_same_v<T, power_law_kernel>)
                return g.k * g.theta * (1.0 + g.theta) * delta;
            else if constexpr (std::is_same_v<T, rayleigh_kernel>)
                return 2.0 * g.k / (g.sigma * g.sigma) * delta;
            else if constexpr (std::is_same_v<T, constant_unit_kernel>)
                return 0.0;  // representation is exact when delta divides 1
            else
                throw unsupported_kernel(
                    "sup_discretization_error: tabulated kernels are already exact");
        },
        spec);
}

// Largest delta = 2^-m whose certified resolvent error meets the target:
// sup_discretization_error(delta) / (1-k)^2 <= target. Powers of two keep all
// grid arithmetic exact in binary floating point.
inline double choose_delta(const kernel_spec& spec, double target_sup_error_of_h) {
    if (!(target_sup_error_of_h > 0.0)) throw error("choose_delta: target must be positive");
    check_invariants(spec);
    if (std::holds_alternative<tabulated_kernel>(spec))
        throw unsupported_kernel("choose_delta: tabulated kernels are already exact");
    if (std::holds_alternative<constant_unit_kernel>(spec)) return 1.0;

    const double k = l1_mass(spec);
    const double slope = sup_discretization_error(spec, 1.0);  // bound = slope * delta
    const double limit = target_sup_error_of_h * (1.0 - k) * (1.0 - k) / slope;
    double delta = 1.0;
    int m = 0;
    while (delta > limit) {
        delta *= 0.5;
        if (++m > 1074) throw tol_unreachable("choose_delta: target below representable step");
    }
    return delta;
}

}  // namespace volterra
