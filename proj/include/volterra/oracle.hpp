#pragma once

// Reference solver used only to cross-check the series pipeline. It discretizes
// the resolvent equation h = g + g*h directly with the trapezoid rule and
// marches forward in time, solving the implicit diagonal term at each node:
//
//   h_0 = g_0
//   h_m = ( g_m + s*( g_m h_0 / 2 + sum_{j=1}^{m-1} g_{m-j} h_j ) ) / ( 1 - s g_0 / 2 )
//
// Second-order accurate for smooth g. Deliberately shares nothing with the main
// pipeline except the kernel callable handed in.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "exceptions.hpp"

namespace volterra {

struct quadrature_solution {
    double step = 0.0;
    std::vector<double> samples;  // values at i*step

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t i) const { return static_cast<double>(i) * step; }
};

namespace detail {

// Trapezoid mass of samples on a uniform grid.
inline double trapezoid_mass(const std::vector<double>& v, double step) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * step;
}

// Discrete trapezoid convolution on a shared grid: w_m = s * sum''_j u_j v_{m-j}.
inline std::vector<double> trapezoid_conv(const std::vector<double>& u,
                                          const std::vector<double>& v, double step) {
    std::vector<double> w(u.size(), 0.0);
    for (std::size_t m = 1; m < u.size(); ++m) {
        double acc = 0.5 * (u[0] * v[m] + u[m] * v[0]);
        for (std::size_t j = 1; j < m; ++j) acc += u[j] * v[m - j];
        w[m] = step * acc;
    }
    return w;
}

}  // namespace detail

inline quadrature_solution solve_volterra_direct(const std::function<double(double)>& g,
                                                 double step, double horizon) {
    if (!(step > 0.0) || !(horizon > 0.0))
        throw error("oracle: step and horizon must be positive");
    if (step > horizon) throw error("oracle: step exceeds horizon");
    const auto m_last = static_cast<std::size_t>(std::llround(horizon / step));
    if (m_last < 1) throw error("oracle: horizon shorter than one step");

    std::vector<double> gs(m_last + 1);
    for (std::size_t i = 0; i <= m_last; ++i) gs[i] = g(static_cast<double>(i) * step);

    if (detail::trapezoid_mass(gs, step) >= 1.0)
        throw mass_exceeds_one("oracle: quadrature mass of kernel >= 1");
    const double diag = 1.0 - 0.5 * step * gs[0];
    if (!(diag > 0.0)) throw error("oracle: implicit diagonal not positive, reduce step");

    quadrature_solution sol;
    sol.step = step;
    sol.samples.assign(m_last + 1, 0.0);
    sol.samples[0] = gs[0];
    for (std::size_t m = 1; m <= m_last; ++m) {
        double acc = 0.5 * gs[m] * sol.samples[0];
        for (std::size_t j = 1; j < m; ++j) acc += gs[m - j] * sol.samples[j];
        sol.samples[m] = (gs[m] + step * acc) / diag;
    }
    return sol;
}

// Partial sums of the series h = sum_n g^(*n) formed by repeated discrete
// trapezoid convolution of the given samples. Optionally records each term's
// quadrature L1 mass (which should track ||g||_1^n).
inline std::vector<double> neumann_direct(const std::vector<double>& g_samples,
                                          double step, int depth,
                                          std::vector<double>* term_masses = nullptr) {
    if (g_samples.size() < 2) throw error("oracle: need at least two samples");
    if (depth < 1) throw error("oracle: depth must be >= 1");
    if (term_masses) term_masses->clear();

    std::vector<double> sum(g_samples.size(), 0.0);
    std::vector<double> term = g_samples;
    for (int n = 1; n <= depth; ++n) {
        if (term_masses) term_masses->push_back(detail::trapezoid_mass(term, step));
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
        if (n < depth) term = detail::trapezoid_conv(g_samples, term, step);
    }
    return sum;
}

}  // namespace volterra
