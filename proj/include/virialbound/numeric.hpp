#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace vb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier's variant of Kahan summation. The cluster sums alternate in sign
// and cancel heavily at large beta, so every long accumulation goes through
// this.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ln(n!) for small n, exact enough for the n^{n-2}/n! prefactors.
inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Surface area of the unit sphere in R^d: 2, 2*pi, 4*pi, ...
inline double unit_sphere_area(int d) {
    if (d == 1) {
        return 2.0;
    }
    if (d == 2) {
        return 2.0 * M_PI;
    }
    if (d == 3) {
        return 4.0 * M_PI;
    }
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// Maps a 64-bit draw to [0, 1) using the top 53 bits. Used instead of
// std::uniform_real_distribution so sample streams are identical across
// standard library implementations.
inline double unit_uniform(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Box-Muller normal deviate from two raw 64-bit draws.
template <class Rng>
double standard_normal(Rng& rng) {
    const double u1 = 1.0 - unit_uniform(rng());
    const double u2 = unit_uniform(rng());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace vb
