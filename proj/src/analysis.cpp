#include "virialbound/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "virialbound/errors.hpp"
#include "virialbound/numeric.hpp"

namespace vb {
namespace {

constexpr double kTailFraction = 1e-10;
constexpr double kPanelTolerance = 1e-13;
constexpr unsigned kMaxDepth = 25;
constexpr int kMaxDoublings = 200;

struct Integrand {
    const PairPotential& p;
    double beta;
    IntegralKind kind;
    double sphere;
    int d;

    double weight(double v) const {
        if (v == kInf) {
            return 1.0;
        }
        return kind == IntegralKind::C ? std::abs(std::expm1(-beta * v))
                                       : -std::expm1(-beta * std::abs(v));
    }
    double operator()(double r) const {
        return sphere * std::pow(r, d - 1) * weight(p.evaluate(r));
    }
};

struct Panel {
    double value = 0.0;
    double error = 0.0;
};

Panel integrate_panel(const Integrand& f, double a, double b) {
    Panel out;
    if (!(b > a)) {
        return out;
    }
    out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, kMaxDepth, kPanelTolerance, &out.error);
    return out;
}

QuadratureResult radial_integral(const PairPotential& p, double beta, IntegralKind kind) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be finite and >= 0");
    }
    QuadratureResult res;
    res.beta = beta;
    res.kind = kind;
    const int d = p.dimension();
    const double sphere = unit_sphere_area(d);
    const double core = p.hard_core_radius();
    CompensatedSum value;
    CompensatedSum error;
    value += sphere * std::pow(core, d) / d;
    if (beta == 0.0) {
        res.value = value.value();
        return res;
    }
    const Integrand f{p, beta, kind, sphere, d};
    const auto& traits = p.traits();

    std::vector<double> cuts{core};
    for (double b : traits.breakpoints) {
        if (b > core && (!traits.support_radius || b < *traits.support_radius)) {
            cuts.push_back(b);
        }
    }
    if (traits.support_radius) {
        cuts.push_back(std::max(core, *traits.support_radius));
    }
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        const Panel panel = integrate_panel(f, cuts[k - 1], cuts[k]);
        value += panel.value;
        error += panel.error;
    }
    if (traits.support_radius) {
        res.value = value.value();
        res.abs_error = error.value();
        return res;
    }

    // Unbounded range: geometric panels [r, 2r] until the tail is negligible.
    double r = cuts.back();
    double next = std::max({2.0 * r, 2.0 * p.length_scale(), traits.tail ? traits.tail->from_radius : 0.0});
    double previous_panel = kInf;
    int growing = 0;
    for (int step = 0; step < kMaxDoublings; ++step, r = next, next *= 2.0) {
        const Panel panel = integrate_panel(f, r, next);
        value += panel.value;
        error += panel.error;
        const double total = value.value();

        if (traits.tail && traits.tail->exponent > d && next >= traits.tail->from_radius) {
            const auto& t = *traits.tail;
            const double tail = sphere * beta * t.amplitude * std::pow(next, d - t.exponent) /
                                (t.exponent - d);
            if (tail < kTailFraction * total) {
                value += tail;
                error += tail;
                res.value = value.value();
                res.abs_error = error.value();
                return res;
            }
            continue;
        }

        const double ratio = previous_panel > 0.0 ? panel.value / previous_panel : 0.0;
        if (panel.value == 0.0 || (ratio <= 0.5 && panel.value < 1e-12 * total)) {
            const double tail = ratio < 1.0 ? panel.value * ratio / (1.0 - ratio) : 0.0;
            value += tail;
            error += tail + panel.value;
            res.value = value.value();
            res.abs_error = error.value();
            return res;
        }
        growing = ratio >= 1.0 ? growing + 1 : 0;
        if (growing >= 8) {
            break;
        }
        previous_panel = panel.value;
    }
    throw TemperednessError("integrand of " + std::string(to_string(kind)) + " for potential '" +
                            p.kind() + "' does not decay: potential is not tempered");
}

// Stationary point of w(e^{-w} - e^{-L}) on (0, min(L, 1)): the root of
// 1 - w - e^{w - L} = 0, written without cancellation.
double g_argmax(double log1p_u) {
    const double L = log1p_u;
    auto psi = [L](double w) { return -w - std::expm1(w - L); };
    const double hi = std::min(L, 1.0);
    const double f_lo = psi(0.0);
    const double f_hi = psi(hi);
    if (f_lo > 0.0 && f_hi < 0.0) {
        std::uintmax_t iterations = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(
            psi, 0.0, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
        return 0.5 * (a + b);
    }
    // Degenerate bracket: maximize the objective itself.
    auto neg = [L](double w) { return -w * std::exp(-w) * -std::expm1(w - L); };
    return boost::math::tools::brent_find_minima(neg, 0.0, hi, 40).first;
}

double g_at(double w, double log1p_u) {
    return w * std::exp(-w) * std::expm1(w - log1p_u) / std::expm1(-log1p_u);
}

void check_radius_args(double beta, double b, double c) {
    if (!(beta >= 0.0) || !(b >= 0.0) || !(c >= 0.0)) {
        throw DomainError("radius arguments must be nonnegative");
    }
}

// ln(1 + e^{x}) for x >= 0.
double log1p_exp(double x) { return x + std::log1p(std::exp(-x)); }

}  // namespace

std::string_view to_string(IntegralKind kind) noexcept {
    return kind == IntegralKind::C ? "C" : "Ctilde";
}

QuadratureResult integral_C(const PairPotential& p, double beta) {
    return radial_integral(p, beta, IntegralKind::C);
}

QuadratureResult integral_Ctilde(const PairPotential& p, double beta) {
    return radial_integral(p, beta, IntegralKind::Ctilde);
}

double g_function_log1p(double log1p_u) {
    if (!(log1p_u > 0.0)) {
        throw DomainError("g(u) needs u > 0");
    }
    if (log1p_u == kInf) {
        return std::exp(-1.0);
    }
    return g_at(g_argmax(log1p_u), log1p_u);
}

double g_function(double u) {
    if (!(u > 0.0)) {
        throw DomainError("g(u) needs u > 0");
    }
    return g_function_log1p(std::log1p(u));
}

double tree_function_w(double x) {
    const double limit = std::exp(-1.0);
    if (!(x >= 0.0) || x > limit) {
        throw DomainError("tree function needs 0 <= x <= 1/e");
    }
    if (x == limit) {
        return 1.0;
    }
    return -boost::math::lambert_w0(-x);
}

double euler_series_partial(double x, int terms) {
    if (!(x >= 0.0) || x > std::exp(-1.0) || terms < 1) {
        throw DomainError("Euler series needs 0 <= x <= 1/e and at least one term");
    }
    if (x == 0.0) {
        return 0.0;
    }
    const double log_x = std::log(x);
    CompensatedSum sum;
    for (int n = 1; n <= terms; ++n) {
        const double log_term = (n - 1) * std::log(static_cast<double>(n)) - log_factorial(n) + n * log_x;
        sum += std::exp(log_term);
    }
    return sum.value();
}

double density_bound_at(double w, double beta, double bbar, double ctilde) {
    return w * (2.0 * std::exp(-w) - 1.0) / (ctilde * std::exp(beta * bbar));
}

double density_lower_bound(double lambda_abs, double beta, double bbar, double ctilde) {
    if (!(lambda_abs >= 0.0) || !(beta >= 0.0) || !(bbar >= 0.0) || !(ctilde > 0.0)) {
        throw DomainError("density bound needs lambda, beta, Bbar >= 0 and Ctilde > 0");
    }
    const double x = ctilde * std::exp(beta * bbar) * lambda_abs;
    if (!(x < std::exp(-1.0))) {
        throw DomainError("|lambda| must be below 1/(e^{beta Bbar + 1} Ctilde)");
    }
    return density_bound_at(tree_function_w(x), beta, bbar, ctilde);
}

double density_lower_bound_series(double lambda_abs, double beta, double bbar, double ctilde,
                                  int terms) {
    if (!(lambda_abs >= 0.0) || !(beta >= 0.0) || !(bbar >= 0.0) || !(ctilde > 0.0)) {
        throw DomainError("density bound needs lambda, beta, Bbar >= 0 and Ctilde > 0");
    }
    const double k = ctilde * std::exp(beta * bbar);
    const double x = k * lambda_abs;
    if (!(x < std::exp(-1.0))) {
        throw DomainError("|lambda| must be below 1/(e^{beta Bbar + 1} Ctilde)");
    }
    return 2.0 * lambda_abs - euler_series_partial(x, terms) / k;
}

DensityBoundMaximum maximize_density_bound(double beta, double bbar, double ctilde) {
    if (!(ctilde > 0.0)) {
        throw DomainError("Ctilde must be > 0");
    }
    auto neg = [](double w) { return -w * (2.0 * std::exp(-w) - 1.0); };
    const auto [w, f] = boost::math::tools::brent_find_minima(neg, 0.0, std::log(2.0), 52);
    return {w, density_bound_at(w, beta, bbar, ctilde)};
}

double radius_mayer(double beta, double B, double ctilde) {
    check_radius_args(beta, B, ctilde);
    if (ctilde == 0.0) {
        return kInf;
    }
    return std::exp(-beta * B - 1.0) / ctilde;
}

double radius_lp(double beta, double B, double c) {
    check_radius_args(beta, B, c);
    if (c == 0.0) {
        return kInf;
    }
    const double x = 2.0 * beta * B;
    return g_function_log1p(log1p_exp(x)) * std::exp(-x) / c;
}

double radius_virial_new(double beta, double bbar, double ctilde) {
    check_radius_args(beta, bbar, ctilde);
    if (ctilde == 0.0) {
        return kInf;
    }
    return g_function(1.0) / (ctilde * std::exp(beta * bbar));
}

RadiiReport build_radii_report(const PairPotential& p, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be a finite positive number");
    }
    if (!p.known_B()) {
        throw UnsupportedPotential("potential '" + p.kind() + "' has no known_B");
    }
    if (!p.known_Bbar()) {
        throw UnsupportedPotential("potential '" + p.kind() + "' has no known_Bbar");
    }
    RadiiReport r;
    r.beta = beta;
    r.B = *p.known_B();
    r.Bbar = p.known_Bbar()->value;
    r.bbar_is_upper_bound = p.known_Bbar()->is_upper_bound;
    r.c = integral_C(p, beta);
    r.ctilde = integral_Ctilde(p, beta);
    r.g_one = g_function(1.0);
    r.g_lp = g_function_log1p(log1p_exp(2.0 * beta * r.B));
    r.radius_mayer = radius_mayer(beta, r.B, r.ctilde.value);
    r.radius_lp = radius_lp(beta, r.B, r.c.value);
    r.radius_virial = radius_virial_new(beta, r.Bbar, r.ctilde.value);
    r.ratio = r.radius_virial / r.radius_lp;
    return r;
}

}  // namespace vb
