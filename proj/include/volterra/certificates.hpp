#pragma once

// A-posteriori error bounds for resolvents and solutions built from an inexact
// kernel. If g1, g2 both have L1 mass <= kb < 1, their resolvents satisfy
//
//   ||h1 - h2||  <=  ||g1 - g2|| / (1 - kb)^2
//
// in the same norm (L1, sup, or sup over a window), and the induced solution
// error for y = f + h*f is bounded by ||f||_1 times that. The square in the
// denominator is the conservative worst case over both factors; it also covers
// the windowed-sup variant.

#include <string>

#include "exceptions.hpp"

namespace volterra {

enum class norm_kind { l1, sup, sup_windowed };

inline const char* to_string(norm_kind k) {
    switch (k) {
        case norm_kind::l1: return "L1";
        case norm_kind::sup: return "SUP";
        case norm_kind::sup_windowed: return "SUP_WINDOWED";
    }
    return "?";
}

struct certificate {
    norm_kind kind = norm_kind::sup;
    double window = 0.0;        // only meaningful for sup_windowed
    double kernel_error = 0.0;  // ||g - g_delta|| in the chosen norm
    double k_bound = 0.0;       // common mass bound, max of the two masses
    double resolvent_error = 0.0;
    double solution_error = 0.0;  // filled by solution_certificate
};

inline certificate resolvent_certificate(double kernel_error, double k_bound,
                                         norm_kind kind = norm_kind::sup,
                                         double window = 0.0) {
    if (!(kernel_error >= 0.0)) throw error("certificate: kernel_error must be >= 0");
    if (!(k_bound >= 0.0 && k_bound < 1.0))
        throw invalid_mass("certificate: need mass bound in [0, 1)");
    certificate c;
    c.kind = kind;
    c.window = window;
    c.kernel_error = kernel_error;
    c.k_bound = k_bound;
    const double d = 1.0 - k_bound;
    c.resolvent_error = kernel_error / (d * d);
    return c;
}

// ||y1 - y2||_sup <= ||h1 - h2||_sup * ||f||_1 for y = f + h*f with shared f.
inline certificate solution_certificate(certificate c, double f_mass) {
    if (!(f_mass >= 0.0)) throw invalid_mass("certificate: f_mass must be >= 0");
    c.solution_error = c.resolvent_error * f_mass;
    return c;
}

// sup h <= sup g / (1 - k): every series term after the first is a convolution
// with an L1 factor, so the sups form a geometric series.
inline double sup_norm_h_bound(double k, double g_sup) {
    if (!(k >= 0.0 && k < 1.0)) throw invalid_mass("sup bound: need k in [0, 1)");
    if (!(g_sup >= 0.0)) throw error("sup bound: g_sup must be >= 0");
    return g_sup / (1.0 - k);
}

}  // namespace volterra
