#pragma once

// The functions gamma_n = rect * rect * ... * rect (n-fold self-convolution of the
// indicator of [0,1)), i.e. the Irwin-Hall densities / cardinal B-splines.
// Two evaluation paths are provided and cross-checked by the tests:
//
//   gamma_closed:      alternating closed form
//                      gamma_n(t) = sum_{r=0}^{n} (-1)^r C(n,r) (t-r)_+^{n-1} / (n-1)!
//   gamma_recurrence:  de Boor style recurrence with nonnegative weights,
//                      gamma_n(t) = [t*gamma_{n-1}(t) + (n-t)*gamma_{n-1}(t-1)]/(n-1)
//
// The closed form loses roughly one bit per term to cancellation as n grows, so a
// dispatcher switches to the recurrence above n_switch.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace volterra {

inline constexpr int default_n_switch = 18;

// gamma_1 is the half-open rect: 1 on [0,1), 0 elsewhere. Consequently
// gamma_1(0) = 1 while gamma_n(0) = 0 for n >= 2, and gamma_n(t) = 0 for t >= n.
inline double gamma_closed(int n, double t, int n_switch = default_n_switch) {
    if (n < 1) throw std::domain_error("gamma_closed: n must be positive");
    if (n > n_switch)
        throw std::domain_error("gamma_closed: n exceeds the cancellation-safe range");
    if (n == 1) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    if (t <= 0.0 || t >= static_cast<double>(n)) return 0.0;
    // gamma_n(t) = gamma_n(n-t): evaluating on the left half keeps the surviving
    // terms of the alternating sum comparable in size. Near the right edge the
    // direct sum would cancel to below rounding noise.
    if (t > 0.5 * n) t = static_cast<double>(n) - t;
    double binom = 1.0;  // C(n, r)
    double sum = 0.0;
    const int rmax = static_cast<int>(t);  // terms with r > t vanish
    for (int r = 0; r <= rmax; ++r) {
        double p = 1.0;
        const double x = t - r;
        for (int i = 0; i < n - 1; ++i) p *= x;
        sum += (r % 2 == 0 ? binom : -binom) * p;
        binom = binom * (n - r) / (r + 1);
    }
    double fact = 1.0;
    for (int i = 2; i <= n - 1; ++i) fact *= i;
    return sum / fact;
}

inline double gamma_recurrence(int n, double t) {
    if (n < 1) throw std::domain_error("gamma_recurrence: n must be positive");
    if (n == 1) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    if (t <= 0.0 || t >= static_cast<double>(n)) return 0.0;
    // v[i] holds gamma_m(t - i); level m = 1 is the rect indicator row.
    // All weights stay nonnegative for t inside the support, so no cancellation.
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    {
        const int j = static_cast<int>(t);  // t in [0, n) so j indexes the active cell
        if (j >= 0 && j < n) v[static_cast<std::size_t>(j)] = 1.0;
    }
    for (int m = 1; m < n; ++m) {
        for (int i = 0; i + m < n; ++i) {
            const double x = t - i;
            v[static_cast<std::size_t>(i)] =
                (x * v[static_cast<std::size_t>(i)] +
                 (static_cast<double>(m + 1) - x) * v[static_cast<std::size_t>(i) + 1]) /
                static_cast<double>(m);
        }
    }
    return v[0];
}

// Dispatching evaluator with an optional uniform-grid memo. The memo exists because
// the resolvent assembles h from gamma_n sampled at integer-shifted copies of one
// grid; rows are keyed by the exact bit patterns of (first, step) so a cache hit is
// bit-for-bit identical to recomputation. Correctness never depends on the cache.
class gamma_evaluator {
  public:
    explicit gamma_evaluator(int n_switch = default_n_switch) : n_switch_(n_switch) {
        if (n_switch_ < 1) throw std::domain_error("gamma_evaluator: n_switch must be >= 1");
    }

    int n_switch() const { return n_switch_; }

    double operator()(int n, double t) const {
        return n <= n_switch_ ? gamma_closed(n, t, n_switch_) : gamma_recurrence(n, t);
    }

    // Values at first + i*step for i = 0..count-1, cached. Rows are immutable once
    // inserted; concurrent calls may race to compute but insert identical data.
    const std::vector<double>& row(int n, double first, double step, int count) const {
        const row_key key{n, bits(first), bits(step), count};
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        std::vector<double> values(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            values[static_cast<std::size_t>(i)] = (*this)(n, first + i * step);
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, std::move(values)).first->second;
    }

  private:
    using row_key = std::tuple<int, std::uint64_t, std::uint64_t, int>;

    static std::uint64_t bits(double x) {
        std::uint64_t u;
        std::memcpy(&u, &x, sizeof u);
        return u;
    }

    int n_switch_;
    mutable std::mutex mutex_;
    mutable std::map<row_key, std::vector<double>> cache_;
};

// Convenience dispatch with the default switch point.
inline double gamma(int n, double t) {
    return n <= default_n_switch ? gamma_closed(n, t) : gamma_recurrence(n, t);
}

}  // namespace volterra
