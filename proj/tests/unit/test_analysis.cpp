#include <doctest.h>

#include <cmath>
#include <vector>

#include "virialbound/analysis.hpp"
#include "virialbound/errors.hpp"

using namespace vb;

namespace {

// Golden-section maximisation of the g(u) objective written out directly,
// after a coarse grid scan to bracket the peak. Independent of the
// stationarity-root method in the library.
double g_oracle(double u) {
    const double top = std::log1p(u);
    auto obj = [u](double w) { return ((1.0 + u) * std::exp(-w) - 1.0) * w / u; };
    int best = 1;
    const int grid = 4000;
    for (int k = 1; k < grid; ++k) {
        if (obj(top * k / grid) > obj(top * best / grid)) {
            best = k;
        }
    }
    double lo = top * (best - 1) / grid;
    double hi = top * (best + 1) / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        (obj(a) < obj(b) ? lo : hi) = obj(a) < obj(b) ? a : b;
    }
    return obj(0.5 * (lo + hi));
}

// Bisection for w e^{-w} = x on [0, 1].
double w_oracle(double x) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(-mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 40-digit reference values from an independent arbitrary-precision
// quadrature of the radial integrals (split at the same kinks, tail to
// infinity).
constexpr double kLjC1 = 12.98137711268265361776528;
constexpr double kLjCt1 = 9.186387746229084428777053;
constexpr double kLjC10 = 29035.24393718804315953865;
constexpr double kLjCt10 = 32.90874974729988084435483;

}  // namespace

TEST_CASE("hard sphere integrals are the ball volume") {
    for (double beta : {0.1, 1.0, 10.0}) {
        const auto hs = catalog::hard_sphere(1.0, 3);
        CHECK(rel(integral_C(hs, beta).value, 4.0 * M_PI / 3.0) < 1e-14);
        CHECK(rel(integral_Ctilde(hs, beta).value, 4.0 * M_PI / 3.0) < 1e-14);
    }
    const auto big = catalog::hard_sphere(2.0, 3);
    CHECK(rel(integral_C(big, 1.0).value, 32.0 * M_PI / 3.0) < 1e-14);
    CHECK(integral_C(catalog::hard_sphere(1.0, 1), 1.0).value == 2.0);
    CHECK(rel(integral_C(catalog::hard_sphere(1.0, 2), 1.0).value, M_PI) < 1e-14);
}

TEST_CASE("square well integrals in closed form") {
    const auto rods = catalog::square_well(1.0, 1.5, 1.0, 1);
    CHECK(rel(integral_C(rods, 1.0).value, 2.0 * (1.0 + 0.5 * (M_E - 1.0))) < 1e-13);
    CHECK(rel(integral_Ctilde(rods, 1.0).value, 2.0 * (1.0 + 0.5 * (1.0 - std::exp(-1.0)))) < 1e-13);
    const auto sw = catalog::square_well(1.0, 2.0, 0.5, 3);
    const double shell = 4.0 * M_PI / 3.0 * (8.0 - 1.0);
    CHECK(rel(integral_C(sw, 2.0).value, 4.0 * M_PI / 3.0 + shell * (M_E - 1.0)) < 1e-13);
    CHECK(rel(integral_Ctilde(sw, 2.0).value, 4.0 * M_PI / 3.0 + shell * (1.0 - std::exp(-1.0))) < 1e-13);
}

TEST_CASE("lennard-jones integrals against high-precision reference") {
    const auto lj = catalog::lennard_jones();
    const auto c1 = integral_C(lj, 1.0);
    const auto t1 = integral_Ctilde(lj, 1.0);
    const auto c10 = integral_C(lj, 10.0);
    const auto t10 = integral_Ctilde(lj, 10.0);
    CHECK(rel(c1.value, kLjC1) < 1e-12);
    CHECK(rel(t1.value, kLjCt1) < 1e-12);
    CHECK(rel(c10.value, kLjC10) < 1e-12);
    CHECK(rel(t10.value, kLjCt10) < 1e-12);
    for (const auto& q : {c1, t1, c10, t10}) {
        CHECK(q.abs_error >= 0.0);
        CHECK(q.abs_error < 1e-8 * q.value);
    }
    CHECK(c1.kind == IntegralKind::C);
    CHECK(t1.kind == IntegralKind::Ctilde);
}

TEST_CASE("Ctilde never exceeds C") {
    const std::vector<PairPotential> pots{catalog::lennard_jones(), catalog::square_well(1.0, 1.5, 1.0, 1),
                                          catalog::square_well(1.0, 1.3, 2.0, 3),
                                          catalog::tabulated({0.5, 1.0, 2.0}, {3.0, -1.0, 0.0}, 2)};
    for (const auto& p : pots) {
        for (double beta : {0.05, 0.5, 1.0, 2.0, 5.0}) {
            CHECK(integral_Ctilde(p, beta).value <= integral_C(p, beta).value * (1 + 1e-12));
        }
    }
    // nonnegative potential: equal
    const auto rep = catalog::tabulated({0.5, 1.0, 2.0}, {3.0, 1.0, 0.0}, 3);
    CHECK(rel(integral_C(rep, 1.0).value, integral_Ctilde(rep, 1.0).value) < 1e-14);
}

TEST_CASE("non-tempered tails are reported") {
    PotentialTraits t;
    t.kind = "slow_tail";
    t.dimension = 3;
    t.hard_core_radius = 1.0;
    const PairPotential slow(t, [](double r) { return -1.0 / r; });
    CHECK_THROWS_AS((void)integral_C(slow, 1.0), TemperednessError);
    CHECK_THROWS_AS((void)integral_C(catalog::lennard_jones(), -1.0), DomainError);
}

TEST_CASE("g function") {
    CHECK(std::abs(g_function(1.0) - 0.14477) < 1e-4);
    CHECK(std::abs(g_function(1e8) - std::exp(-1.0)) < 1e-3);
    CHECK(std::abs(g_function(0.01) - 0.0025) < 0.05 * 0.0025);
    for (double u : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 1e3, 1e6}) {
        CHECK(std::abs(g_function(u) - g_oracle(u)) < 1e-12);
    }
    double prev = 0.0;
    for (double u = 1.0; u <= 1e8; u *= 10.0) {
        const double g = g_function(u);
        CHECK(g >= prev);
        CHECK(g > 0.0);
        CHECK(g < std::exp(-1.0));
        prev = g;
    }
    CHECK(std::abs(g_function_log1p(2000.0) - std::exp(-1.0)) < 1e-12);
    CHECK_THROWS_AS((void)g_function(0.0), DomainError);
    CHECK_THROWS_AS((void)g_function(-1.0), DomainError);
}

TEST_CASE("tree function") {
    CHECK(tree_function_w(0.0) == 0.0);
    CHECK(tree_function_w(std::exp(-1.0)) == 1.0);
    const double w = tree_function_w(0.2);
    CHECK(std::abs(w - 0.2592) < 1e-4);
    CHECK(std::abs(w * std::exp(-w) - 0.2) < 1e-15);
    for (double x = 0.0; x < 0.36; x += 0.01) {
        CHECK(std::abs(tree_function_w(x) - w_oracle(x)) < 1e-13);
    }
    // round trip; at w -> 1 the inverse is square-root ill-conditioned, so
    // the tight tolerance applies away from it
    for (double v = 0.0; v <= 0.999; v += 0.001) {
        CHECK(std::abs(tree_function_w(v * std::exp(-v)) - v) < 1e-12);
    }
    for (double v = 0.999; v <= 1.0; v += 0.0001) {
        CHECK(std::abs(tree_function_w(std::min(v * std::exp(-v), std::exp(-1.0))) - v) < 1e-7);
    }
    CHECK_THROWS_AS((void)tree_function_w(-0.1), DomainError);
    CHECK_THROWS_AS((void)tree_function_w(0.4), DomainError);
}

TEST_CASE("euler series") {
    CHECK(euler_series_partial(0.0, 10) == 0.0);
    CHECK(euler_series_partial(0.25, 1) == 0.25);
    CHECK(euler_series_partial(0.1, 3) == doctest::Approx(0.1 + 0.01 + 1.5 * 0.001).epsilon(1e-15));
    for (double x : {0.1, 0.2, 0.3}) {
        CHECK(std::abs(euler_series_partial(x, 100) - tree_function_w(x)) < 1e-8);
    }
    // At x = 0.35 the ratio of successive terms tends to e x = 0.951, so 100
    // terms leave a tail of a few 1e-5; the missing part is exactly that tail.
    long double tail = 0.0L;
    for (int n = 101; n <= 20000; ++n) {
        tail += std::exp((n - 1) * std::log(static_cast<long double>(n)) - std::lgamma(n + 1.0L) +
                         n * std::log(0.35L));
    }
    const double gap = tree_function_w(0.35) - euler_series_partial(0.35, 100);
    CHECK(gap > 1e-5);
    CHECK(std::abs(gap - static_cast<double>(tail)) < 1e-12);
    CHECK(std::abs(euler_series_partial(0.35, 2000) - tree_function_w(0.35)) < 1e-12);
    // log-domain terms stay finite far past n = 170
    CHECK(std::isfinite(euler_series_partial(0.3, 400)));
    CHECK_THROWS_AS((void)euler_series_partial(0.1, 0), DomainError);
    CHECK_THROWS_AS((void)euler_series_partial(0.5, 10), DomainError);
}

TEST_CASE("density lower bound") {
    const double beta = 1.0;
    const double bbar = 0.7;
    const double ct = 2.3;
    const double k = ct * std::exp(beta * bbar);
    CHECK(density_lower_bound(0.0, beta, bbar, ct) == 0.0);
    const double lam = 0.5 / (std::exp(beta * bbar + 1.0) * ct);
    CHECK(std::abs(density_lower_bound(lam, beta, bbar, ct) -
                   density_lower_bound_series(lam, beta, bbar, ct, 200)) < 1e-8);
    CHECK(std::abs(density_bound_at(std::log(2.0), beta, bbar, ct)) < 1e-16);
    const double w = tree_function_w(k * lam);
    CHECK(density_lower_bound(lam, beta, bbar, ct) == doctest::Approx(w / k * (2 * std::exp(-w) - 1)));
    CHECK_THROWS_AS((void)density_lower_bound(1.0 / (std::exp(beta * bbar + 1.0) * ct) * 1.01, beta, bbar, ct),
                    DomainError);
}

TEST_CASE("virial radius equals the maximum of the density curve") {
    for (double ct : {4.0 * M_PI / 3.0, 1.0, 9.186387746229084}) {
        for (double bbar : {0.0, 1.0, 8.61861}) {
            const double r = radius_virial_new(1.0, bbar, ct);
            const auto m = maximize_density_bound(1.0, bbar, ct);
            CHECK(std::abs(m.value - r) <= 1e-10 * r);
        }
    }
    // argmax solves 2 e^{-w} (1 - w) = 1
    double lo = 0.0;
    double hi = std::log(2.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (2.0 * std::exp(-mid) * (1.0 - mid) > 1.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(maximize_density_bound(1.0, 0.0, 1.0).w - lo) < 1e-7);
    CHECK(std::abs(lo * (2.0 * std::exp(-lo) - 1.0) - g_function(1.0)) < 1e-13);
}

TEST_CASE("radius formulas") {
    CHECK(radius_mayer(1.0, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(radius_mayer(1.0, 0.3, 2.0) == doctest::Approx(0.5 * radius_mayer(1.0, 0.3, 1.0)).epsilon(1e-15));
    CHECK(radius_lp(1.0, 0.0, 1.0) == doctest::Approx(g_function(1.0)).epsilon(1e-15));
    CHECK(radius_lp(2.0, 0.0, 3.0) == doctest::Approx(g_function(1.0) / 3.0).epsilon(1e-15));
    CHECK(std::abs(radius_lp(1.0, 20.0, 1.5) / (std::exp(-1.0 - 40.0) / 1.5) - 1.0) < 0.01);
    CHECK(radius_virial_new(1.0, 0.0, 4.0 * M_PI / 3.0) == doctest::Approx(0.034563).epsilon(1e-4));
    CHECK(std::isinf(radius_virial_new(1.0, 0.0, 0.0)));
    CHECK(std::isinf(radius_mayer(1.0, 0.0, 0.0)));
    for (double x : {0.5, 1.0, 2.0}) {
        CHECK(radius_mayer(1.0, 1.0, x) > radius_mayer(1.0, 1.0, 2 * x));
        CHECK(radius_lp(1.0, 1.0, x) > radius_lp(1.0, 1.0, 2 * x));
        CHECK(radius_virial_new(1.0, 1.0, x) > radius_virial_new(1.0, 1.0, 2 * x));
        CHECK(radius_lp(1.0, 1.0, x) > 0.0);
    }
}

TEST_CASE("radii reports") {
    const auto hs = catalog::hard_sphere(1.0, 3);
    for (double beta : {1.0, 10.0}) {
        const auto r = build_radii_report(hs, beta);
        CHECK(std::abs(r.ratio - 1.0) < 1e-12);
        CHECK(std::isfinite(r.radius_mayer));
        CHECK_FALSE(r.bbar_is_upper_bound);
    }
    const auto lj = catalog::lennard_jones();
    const auto r1 = build_radii_report(lj, 1.0);
    CHECK(r1.bbar_is_upper_bound);
    CHECK(std::abs(r1.ratio / (r1.radius_virial / r1.radius_lp) - 1.0) < 1e-12);
    CHECK(std::abs(r1.ratio / ((r1.c.value / r1.ctilde.value) * (r1.g_one / r1.g_lp) *
                               std::exp(2 * 8.61 - 8.61861)) - 1.0) < 1e-12);
    const auto r2 = build_radii_report(lj, 2.0);
    CHECK(r2.radius_mayer < r1.radius_mayer);
    CHECK_THROWS_AS((void)build_radii_report(catalog::square_well(1.0, 1.5, 1.0, 3), 1.0), UnsupportedPotential);
}
