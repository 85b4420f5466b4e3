#pragma once

#include <string_view>

#include "virialbound/potentials.hpp"

namespace vb {

enum class IntegralKind {
    C,       // integral of |1 - e^{-beta V}|
    Ctilde,  // integral of 1 - e^{-beta |V|}
};

[[nodiscard]] std::string_view to_string(IntegralKind kind) noexcept;

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    double beta = 0.0;
    IntegralKind kind = IntegralKind::C;
};

// Radial quadrature over R^d: S_{d-1} int_0^inf r^{d-1} h(V(r)) dr. The hard
// core is closed form, the rest adaptive Gauss-Kronrod split at the
// potential's breakpoints, with geometric panels out to a cutoff where the
// remaining tail is below 1e-10 of the total. Throws TemperednessError when
// the tail does not decay.
[[nodiscard]] QuadratureResult integral_C(const PairPotential& p, double beta);
[[nodiscard]] QuadratureResult integral_Ctilde(const PairPotential& p, double beta);

// g(u) = max over 0 < w < ln(1+u) of [(1+u) e^{-w} - 1] w / u.
[[nodiscard]] double g_function(double u);
// Same function parameterised by L = ln(1+u); usable when 1+u overflows.
[[nodiscard]] double g_function_log1p(double log1p_u);

// Unique w in [0, 1] with w e^{-w} = x, for 0 <= x <= 1/e.
[[nodiscard]] double tree_function_w(double x);

// sum_{n=1}^{terms} n^{n-1}/n! x^n.
[[nodiscard]] double euler_series_partial(double x, int terms);

// (w / K)(2 e^{-w} - 1) with K = Ctilde e^{beta Bbar}.
[[nodiscard]] double density_bound_at(double w, double beta, double bbar, double ctilde);

// Lower bound on |rho(lambda)|: w from w e^{-w} = K |lambda|, then the
// closed form above. Requires K |lambda| < 1/e.
[[nodiscard]] double density_lower_bound(double lambda_abs, double beta, double bbar,
                                         double ctilde);
// 2|lambda| - (1/K) sum_{n<=terms} n^{n-1}/n! (K|lambda|)^n, the series the
// closed form sums.
[[nodiscard]] double density_lower_bound_series(double lambda_abs, double beta, double bbar,
                                                double ctilde, int terms);

struct DensityBoundMaximum {
    double w = 0.0;
    double value = 0.0;
};

// Direct maximization of the density lower-bound curve over w in (0, ln 2).
[[nodiscard]] DensityBoundMaximum maximize_density_bound(double beta, double bbar, double ctilde);

// 1 / (e^{beta B + 1} Ctilde).
[[nodiscard]] double radius_mayer(double beta, double B, double ctilde);
// g(e^{2 beta B}) / (e^{2 beta B} C).
[[nodiscard]] double radius_lp(double beta, double B, double c);
// g(1) / (Ctilde e^{beta Bbar}).
[[nodiscard]] double radius_virial_new(double beta, double bbar, double ctilde);

struct RadiiReport {
    double beta = 0.0;
    double B = 0.0;
    double Bbar = 0.0;
    bool bbar_is_upper_bound = false;  // radius and ratio are conservative
    QuadratureResult c;
    QuadratureResult ctilde;
    double g_one = 0.0;
    double g_lp = 0.0;  // g(e^{2 beta B})
    double radius_mayer = 0.0;
    double radius_lp = 0.0;
    double radius_virial = 0.0;
    double ratio = 0.0;  // radius_virial / radius_lp
};

// Both quadratures and every radius at one beta. Throws UnsupportedPotential
// when B or B-bar is unknown.
[[nodiscard]] RadiiReport build_radii_report(const PairPotential& p, double beta);

}  // namespace vb
