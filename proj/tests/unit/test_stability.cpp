#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "virialbound/errors.hpp"
#include "virialbound/stability.hpp"

using namespace vb;

namespace {

// Exhaustive grid minimisation of U for 1D square-well rods: particle 0 at
// the origin, the others on a grid. Returns max over the grid of -U.
double rods_grid_min_energy(const PairPotential& p, int n, double step, double extent) {
    const int m = static_cast<int>(std::lround(2 * extent / step)) + 1;
    std::vector<double> grid(m);
    for (int k = 0; k < m; ++k) {
        grid[k] = -extent + step * k;
    }
    std::vector<int> idx(n - 1, 0);
    double best = 0.0;
    while (true) {
        std::vector<double> x{0.0};
        for (int k : idx) {
            x.push_back(grid[k]);
        }
        double u = 0.0;
        for (int i = 0; i < n && std::isfinite(u); ++i) {
            for (int j = i + 1; j < n; ++j) {
                u += p.evaluate(std::abs(x[i] - x[j]));
            }
        }
        best = std::min(best, u);
        int pos = 0;
        while (pos < n - 1 && ++idx[pos] == m) {
            idx[pos++] = 0;
        }
        if (pos == n - 1) {
            break;
        }
    }
    return -best;
}

bool all_passed(const StabilityCheckReport& r) {
    for (const auto& c : r.checks) {
        if (c.applicable && !c.passed) {
            MESSAGE(c.name << ": " << c.detail);
        }
    }
    return r.passed;
}

}  // namespace

TEST_CASE("regular simplices") {
    const auto s1 = simplex_configuration(1, 2.5);
    CHECK(s1.size() == 2);
    CHECK(s1.distance(0, 1) == doctest::Approx(2.5).epsilon(1e-15));
    for (int d = 1; d <= 6; ++d) {
        const auto s = simplex_configuration(d, 1.0);
        REQUIRE(s.size() == d + 1);
        for (int i = 0; i <= d; ++i) {
            for (int j = i + 1; j <= d; ++j) {
                CHECK(std::abs(s.distance(i, j) - 1.0) < 1e-12);
            }
        }
    }
    const auto lj = catalog::lennard_jones();
    CHECK(pair_energy_sum(lj, simplex_configuration(3, 1.0)) == -6.0);
    CHECK(count_pairs_at(regular_simplex(3, 3, 1.0), 1.0) == 3);
    CHECK_THROWS((void)regular_simplex(5, 3, 1.0));
}

TEST_CASE("close-packed patches") {
    const auto chain = close_packed_patch(1, 2);
    CHECK(chain.config.size() == 5);
    CHECK(chain.unit_pairs == 4);
    CHECK(coordination(chain.config, chain.center, 1.0) == 2);

    const auto tri = close_packed_patch(2, 2);
    CHECK(coordination(tri.config, tri.center, 1.0) == 6);
    CHECK(count_pairs_at(tri.config, 1.0) == tri.unit_pairs);

    const auto fcc = close_packed_patch(3, 1);
    CHECK(coordination(fcc.config, fcc.center, 1.0) == 12);
    CHECK(coordination(close_packed_patch(3, 2).config, 0, 1.0) == 2 * 3 * (3 - 1));
    // no two sites closer than the lattice spacing
    for (int i = 0; i < fcc.config.size(); ++i) {
        for (int j = i + 1; j < fcc.config.size(); ++j) {
            CHECK(fcc.config.distance(i, j) > 1.0 - 1e-12);
        }
    }
    CHECK_THROWS((void)close_packed_patch(4, 1));
}

TEST_CASE("hard spheres have zero stability constants") {
    const auto hs = catalog::hard_sphere(1.0, 3);
    for (int n = 2; n <= 4; ++n) {
        const auto est = estimate_Bn(hs, n, {4, 1, 1, 2000});
        CHECK(est.Bn == 0.0);
        CHECK(est.Bbar_n == 0.0);
        CHECK(all_passed(check_stability_inequalities(est, hs, {500, 1, 1e-9})));
    }
    CHECK_THROWS_AS((void)estimate_Bn(hs, 1, {}), DomainError);
}

TEST_CASE("square-well rods against grid oracle") {
    const auto rods = catalog::square_well(1.0, 1.5, 1.0, 1);
    for (int n = 2; n <= 4; ++n) {
        const double grid = rods_grid_min_energy(rods, n, 0.05, 4.5);
        CHECK(grid == doctest::Approx(n - 1));
        const auto est = estimate_Bn(rods, n, {16, 7, 1, 20000});
        CHECK(std::abs(est.Bbar_n - grid / (n - 1)) < 1e-3);
        CHECK(std::abs(est.Bn - static_cast<double>(n - 1) / n) < 1e-3);
        CHECK(est.Bbar_n == doctest::Approx(est.Bn * n / (n - 1)).epsilon(1e-15));
        CHECK(all_passed(check_stability_inequalities(est, rods, {2000, 3, 1e-9})));
    }
}

TEST_CASE("lennard-jones witnesses") {
    const auto lj = catalog::lennard_jones();
    const auto est = estimate_Bn(lj, 4, {8, 1, 2, 20000});
    CHECK(est.Bn >= 1.5);
    CHECK(est.energy <= -6.0);
    CHECK(est.energy == doctest::Approx(pair_energy_sum(lj, est.best)));
    const auto report = check_stability_inequalities(est, lj, {2000, 1, 1e-9});
    CHECK(all_passed(report));
    bool saw_cap = false;
    for (const auto& c : report.checks) {
        saw_cap = saw_cap || (c.applicable && c.name.find("cap") != std::string::npos);
    }
    CHECK(saw_cap);
    CHECK(well_cap_factor(3) == doctest::Approx(13.0 / 12.0));
    CHECK(well_cap_factor(2) == doctest::Approx(7.0 / 6.0));
    CHECK(well_cap_factor(1) == doctest::Approx(1.5));
}

TEST_CASE("stability estimates do not depend on worker count") {
    const auto lj = catalog::lennard_jones();
    const auto a = estimate_Bn(lj, 5, {6, 9, 1, 5000});
    const auto b = estimate_Bn(lj, 5, {6, 9, 3, 5000});
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("a wrong constant is caught") {
    const auto lj = catalog::lennard_jones().with_constants(0.5, BasuevConstant{0.6, false});
    const auto est = estimate_Bn(lj, 4, {4, 1, 1, 5000});
    CHECK_FALSE(check_stability_inequalities(est, lj, {100, 1, 1e-9}).passed);
}
