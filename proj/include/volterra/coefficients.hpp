#pragma once

// Coefficient triangle beta^n_r: writing the unit-step kernel as the shift series
// A = sum_j a_j L^j (L = shift by one step), beta^n_r is the coefficient of L^r in
// A^n. Row n+1 is the discrete convolution of the weights a with row n, truncated
// at the horizon shift R. Row sums obey sum_r beta^n_r = (sum_j a_j)^n whenever the
// truncation is lossless, which the tests use as a mass identity check.

#include <cstddef>
#include <vector>

#include "exceptions.hpp"

namespace volterra {

struct beta_triangle {
    std::vector<double> a;                  // unit-scale weights, a_j = beta_j * delta
    int depth = 0;                          // N, number of rows
    int max_shift = 0;                      // R, last stored shift index
    std::vector<std::vector<double>> rows;  // rows[n-1][r], n = 1..depth, r = 0..max_shift
    double k_eff = 0.0;                     // sum of a

    const std::vector<double>& row(int n) const {
        if (n < 1 || n > depth) throw error("beta_triangle: row index out of range");
        return rows[static_cast<std::size_t>(n - 1)];
    }

    // Index of the last nonzero weight, or -1 if a is identically zero.
    int last_weight_index() const {
        for (std::size_t j = a.size(); j-- > 0;)
            if (a[j] != 0.0) return static_cast<int>(j);
        return -1;
    }
};

inline beta_triangle build_triangle(std::vector<double> a, int depth, int max_shift) {
    if (depth < 1) throw error("build_triangle: depth must be >= 1");
    if (max_shift < 0) throw error("build_triangle: max_shift must be >= 0");
    if (a.empty()) throw error("build_triangle: need at least one weight");

    beta_triangle tri;
    tri.k_eff = 0.0;
    for (double w : a) {
        if (w < 0.0) throw error("build_triangle: negative weights are not supported");
        tri.k_eff += w;
    }
    if (tri.k_eff >= 1.0) throw mass_exceeds_one("build_triangle: sum of weights >= 1");

    tri.a = std::move(a);
    tri.depth = depth;
    tri.max_shift = max_shift;
    const auto width = static_cast<std::size_t>(max_shift) + 1;
    tri.rows.assign(static_cast<std::size_t>(depth), std::vector<double>(width, 0.0));

    auto& first = tri.rows[0];
    for (std::size_t r = 0; r < width && r < tri.a.size(); ++r) first[r] = tri.a[r];

    // Full convolution each level; entries beyond max_shift are dropped. Dropped
    // entries can only feed shifts > max_shift later, so rows r <= max_shift are
    // exactly what an untruncated computation would produce.
    for (int n = 1; n < depth; ++n) {
        const auto& prev = tri.rows[static_cast<std::size_t>(n - 1)];
        auto& next = tri.rows[static_cast<std::size_t>(n)];
        for (std::size_t l = 0; l < tri.a.size() && l < width; ++l) {
            const double al = tri.a[l];
            if (al == 0.0) continue;
            const std::size_t rmax = width - l;
            for (std::size_t r = 0; r < rmax; ++r) {
                const double p = prev[r];
                if (p != 0.0) next[r + l] += al * p;
            }
        }
    }
    return tri;
}

struct mass_info {
    double sum = 0.0;       // sum_r beta^n_r over the stored row
    bool lossless = false;  // true when R >= n * (last nonzero weight index)
};

// Row-sum diagnostic. When the truncation is lossless the sum must equal k_eff^n;
// otherwise it is only a lower bound and is flagged as such.
inline mass_info mass_check(const beta_triangle& tri, int n) {
    const auto& row = tri.row(n);
    mass_info info;
    for (double v : row) info.sum += v;
    const int jmax = tri.last_weight_index();
    info.lossless = jmax < 0 || tri.max_shift >= n * jmax;
    return info;
}

}  // namespace volterra
