#include "virialbound/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "virialbound/errors.hpp"
#include "virialbound/numeric.hpp"
#include "virialbound/parallel.hpp"

namespace vb {
namespace {

// Nearest-neighbour spacing that sits inside the attractive region.
double witness_spacing(const PairPotential& p) {
    const auto& t = p.traits();
    if (t.hard_core_radius > 0.0 && t.support_radius && *t.support_radius > t.hard_core_radius) {
        return 0.5 * (t.hard_core_radius + *t.support_radius);
    }
    if (t.well_radius && *t.well_radius > 0.0) {
        return *t.well_radius;
    }
    return p.length_scale() * (t.hard_core_radius > 0.0 ? 1.0 + 1e-9 : 1.0);
}

double energy_of(const PairPotential& p, int d, std::span<const double> x) {
    const int n = static_cast<int>(x.size()) / d;
    CompensatedSum u;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dx = x[static_cast<std::size_t>(i * d + a)] - x[static_cast<std::size_t>(j * d + a)];
                r2 += dx * dx;
            }
            const double v = p.evaluate(std::sqrt(r2));
            if (v == kInf) {
                return kInf;
            }
            u += v;
        }
    }
    return u.value();
}

struct LocalResult {
    std::vector<double> x;
    double f = kInf;
    std::uint64_t iterations = 0;
};

// Nelder-Mead with standard coefficients. Infeasible trial points carry
// f = +inf and are never accepted over a finite vertex.
template <class F>
LocalResult nelder_mead(const F& f, std::vector<double> x0, double step, int max_iterations) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> pts(dim + 1, x0);
    std::vector<double> val(dim + 1);
    for (std::size_t k = 0; k < dim; ++k) {
        pts[k + 1][k] += step;
    }
    for (std::size_t k = 0; k <= dim; ++k) {
        val[k] = f(pts[k]);
    }
    std::vector<std::size_t> idx(dim + 1);
    std::vector<double> centroid(dim);
    std::vector<double> trial(dim);
    std::vector<double> trial2(dim);
    LocalResult out;
    for (int it = 0; it < max_iterations; ++it) {
        ++out.iterations;
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = idx.front();
        const std::size_t worst = idx.back();
        const std::size_t second = idx[dim - 1];
        if (std::isfinite(val[worst]) &&
            std::abs(val[worst] - val[best]) <= 1e-15 * (1.0 + std::abs(val[best]))) {
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= dim; ++k) {
            if (k == worst) {
                continue;
            }
            for (std::size_t a = 0; a < dim; ++a) {
                centroid[a] += pts[k][a] / static_cast<double>(dim);
            }
        }
        auto along = [&](double t, std::vector<double>& dst) {
            for (std::size_t a = 0; a < dim; ++a) {
                dst[a] = centroid[a] + t * (pts[worst][a] - centroid[a]);
            }
            return f(dst);
        };
        const double fr = along(-1.0, trial);
        if (fr < val[best]) {
            const double fe = along(-2.0, trial2);
            if (fe < fr) {
                pts[worst] = trial2;
                val[worst] = fe;
            } else {
                pts[worst] = trial;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = trial;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const double fc = along(outside ? -0.5 : 0.5, trial2);
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = trial2;
            val[worst] = fc;
            continue;
        }
        for (std::size_t k = 0; k <= dim; ++k) {
            if (k == best) {
                continue;
            }
            for (std::size_t a = 0; a < dim; ++a) {
                pts[k][a] = pts[best][a] + 0.5 * (pts[k][a] - pts[best][a]);
            }
            val[k] = f(pts[k]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
    out.x = pts[best];
    out.f = val[best];
    return out;
}

// Random start; with a hard core, points are placed one by one and redrawn on
// overlap.
std::vector<double> random_start(const PairPotential& p, int n, double spacing, std::mt19937_64& rng) {
    const int d = p.dimension();
    const double side = spacing * std::pow(static_cast<double>(n), 1.0 / d) * 1.5;
    std::vector<double> x(static_cast<std::size_t>(n * d));
    for (int i = 0; i < n; ++i) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            for (int a = 0; a < d; ++a) {
                x[static_cast<std::size_t>(i * d + a)] = (unit_uniform(rng()) - 0.5) * side;
            }
            const std::span<const double> head(x.data(), static_cast<std::size_t>((i + 1) * d));
            if (energy_of(p, d, head) < kInf) {
                break;
            }
        }
    }
    return x;
}

std::vector<double> embed(const Configuration& c, int n, double scale) {
    std::vector<double> x(c.coords().begin(), c.coords().begin() + static_cast<std::ptrdiff_t>(n * c.dimension()));
    for (auto& v : x) {
        v *= scale;
    }
    return x;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

Configuration regular_simplex(int vertices, int dimension, double side) {
    if (vertices < 1 || dimension < 1 || vertices > dimension + 1 || !(side > 0.0)) {
        throw DomainError("regular simplex needs 1 <= vertices <= dimension + 1 and side > 0");
    }
    const auto d = static_cast<std::size_t>(dimension);
    std::vector<double> x(static_cast<std::size_t>(vertices) * d, 0.0);
    for (int k = 1; k < vertices; ++k) {
        const auto row = static_cast<std::size_t>(k) * d;
        for (int j = 0; j < k; ++j) {
            for (std::size_t a = 0; a < d; ++a) {
                x[row + a] += x[static_cast<std::size_t>(j) * d + a] / k;
            }
        }
        x[row + static_cast<std::size_t>(k - 1)] = side * std::sqrt((k + 1.0) / (2.0 * k));
    }
    return Configuration(dimension, std::move(x));
}

Configuration simplex_configuration(int dimension, double side) {
    return regular_simplex(dimension + 1, dimension, side);
}

LatticePatch close_packed_patch(int dimension, int shells) {
    if (dimension < 1 || dimension > 3) {
        throw DomainError("close-packed patches are available for d = 1, 2, 3");
    }
    if (shells < 1) {
        throw DomainError("patch needs at least one shell");
    }
    std::vector<std::vector<double>> sites;
    if (dimension == 1) {
        for (int i = -shells; i <= shells; ++i) {
            sites.push_back({static_cast<double>(i)});
        }
    } else if (dimension == 2) {
        const double h = std::sqrt(3.0) / 2.0;
        for (int i = -shells; i <= shells; ++i) {
            for (int j = -shells; j <= shells; ++j) {
                if (std::max({std::abs(i), std::abs(j), std::abs(i + j)}) <= shells) {
                    sites.push_back({i + 0.5 * j, h * j});
                }
            }
        }
    } else {
        const double s = 1.0 / std::sqrt(2.0);
        for (int i = -2 * shells; i <= 2 * shells; ++i) {
            for (int j = -2 * shells; j <= 2 * shells; ++j) {
                for (int k = -2 * shells; k <= 2 * shells; ++k) {
                    if ((i + j + k) % 2 == 0 && std::abs(i) + std::abs(j) + std::abs(k) <= 2 * shells) {
                        sites.push_back({s * i, s * j, s * k});
                    }
                }
            }
        }
    }
    auto norm2 = [](const std::vector<double>& v) {
        return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    };
    std::stable_sort(sites.begin(), sites.end(), [&](const auto& a, const auto& b) {
        const double na = norm2(a);
        const double nb = norm2(b);
        return na != nb ? na < nb : a < b;
    });
    std::vector<double> flat;
    for (const auto& s : sites) {
        flat.insert(flat.end(), s.begin(), s.end());
    }
    LatticePatch patch;
    patch.config = Configuration(dimension, std::move(flat));
    patch.center = 0;
    patch.unit_pairs = count_pairs_at(patch.config, 1.0);
    return patch;
}

std::size_t count_pairs_at(const Configuration& c, double distance, double tol) {
    std::size_t count = 0;
    for (int i = 0; i < c.size(); ++i) {
        for (int j = i + 1; j < c.size(); ++j) {
            count += std::abs(c.distance(i, j) - distance) <= tol ? 1 : 0;
        }
    }
    return count;
}

int coordination(const Configuration& c, int site, double distance, double tol) {
    int count = 0;
    for (int j = 0; j < c.size(); ++j) {
        if (j != site && std::abs(c.distance(site, j) - distance) <= tol) {
            ++count;
        }
    }
    return count;
}

StabilityEstimate estimate_Bn(const PairPotential& p, int n, const StabilityOptions& opts) {
    if (n < 2) {
        throw DomainError("stability estimates need n >= 2");
    }
    if (opts.starts < 0) {
        throw DomainError("number of random starts must be >= 0");
    }
    const int d = p.dimension();
    const double spacing = witness_spacing(p);

    std::vector<std::vector<double>> starts;
    if (d <= 3) {
        int shells = 1;
        while (close_packed_patch(d, shells).config.size() < n) {
            ++shells;
        }
        starts.push_back(embed(close_packed_patch(d, shells).config, n, spacing));
    }
    if (n <= d + 1) {
        starts.push_back(embed(regular_simplex(n, d, 1.0), n, spacing));
    }
    for (int s = 0; s < opts.starts; ++s) {
        auto rng = stream_rng(opts.seed, static_cast<std::uint64_t>(s));
        starts.push_back(random_start(p, n, spacing, rng));
    }

    const auto f = [&p, d](const std::vector<double>& x) { return energy_of(p, d, x); };
    std::vector<LocalResult> results(starts.size());
    auto run = [&](std::uint64_t k) {
        LocalResult r = nelder_mead(f, starts[k], 0.1 * spacing, opts.max_iterations);
        std::uint64_t iterations = r.iterations;
        // Restart from the optimum; a collapsed simplex often stalls early.
        for (int restart = 0; restart < 2 && std::isfinite(r.f); ++restart) {
            LocalResult again = nelder_mead(f, r.x, 0.02 * spacing, opts.max_iterations);
            iterations += again.iterations;
            if (again.f < r.f) {
                r.x = std::move(again.x);
                r.f = again.f;
            }
        }
        r.iterations = iterations;
        results[k] = std::move(r);
    };
    parallel_for(starts.size(), opts.workers, run);

    std::size_t best = 0;
    std::uint64_t iterations = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        iterations += results[k].iterations;
        if (results[k].f < results[best].f) {
            best = k;
        }
    }
    StabilityEstimate est;
    est.n = n;
    // Spreading the points apart drives U to 0 for a tempered potential, so
    // the suprema are never negative.
    est.energy = std::min(results[best].f, 0.0);
    est.Bn = -est.energy / n + 0.0;
    est.Bbar_n = -est.energy / (n - 1) + 0.0;
    est.best = Configuration(d, results[best].x);
    est.starts = static_cast<int>(starts.size());
    est.iterations = iterations;
    est.seed = opts.seed;
    return est;
}

double well_cap_factor(int dimension) {
    if (dimension < 1) {
        throw DomainError("dimension must be >= 1");
    }
    if (dimension == 1) {
        return 1.5;
    }
    if (dimension == 2) {
        return 7.0 / 6.0;
    }
    const double k = 2.0 * dimension * (dimension - 1);
    return (k + 1.0) / k;
}

StabilityCheckReport check_stability_inequalities(const StabilityEstimate& est, const PairPotential& p,
                                                  const CheckOptions& opts) {
    StabilityCheckReport report;
    const int n = est.n;
    const int d = p.dimension();
    const double tol = opts.tolerance;
    auto add = [&report](InequalityCheck c) {
        if (c.applicable && !c.passed) {
            report.passed = false;
        }
        report.checks.push_back(std::move(c));
    };
    const auto& B = p.known_B();
    const auto& Bbar = p.known_Bbar();

    {
        const double expected = est.Bn * n / (n - 1);
        const bool ok = std::abs(est.Bbar_n - expected) <= 1e-14 * std::max(1.0, std::abs(expected));
        add({"normalization_Bbar_n_eq_n_over_n_minus_1_Bn", true, ok,
             "Bbar_n=" + fmt(est.Bbar_n) + " n/(n-1)*B_n=" + fmt(expected)});
    }
    if (B) {
        add({"estimate_B_n_le_known_B", true, est.Bn <= *B * (1.0 + tol) + tol,
             "B_n=" + fmt(est.Bn) + " B=" + fmt(*B)});
    } else {
        add({"estimate_B_n_le_known_B", false, true, "known_B missing"});
    }
    if (Bbar) {
        add({"estimate_Bbar_n_le_known_Bbar", true, est.Bbar_n <= Bbar->value * (1.0 + tol) + tol,
             "Bbar_n=" + fmt(est.Bbar_n) + " Bbar=" + fmt(Bbar->value) +
                 (Bbar->is_upper_bound ? " (upper bound)" : "")});
    } else {
        add({"estimate_Bbar_n_le_known_Bbar", false, true, "known_Bbar missing"});
    }

    // Random configurations at roughly the potential's natural density.
    if (B || Bbar) {
        const double spacing = witness_spacing(p);
        auto rng = stream_rng(opts.seed, 0xB0B0);
        double worst_b = kInf;
        double worst_bbar = kInf;
        for (int t = 0; t < opts.trials; ++t) {
            const int m = 2 + static_cast<int>(rng() % 7);
            const double side = spacing * std::pow(static_cast<double>(m), 1.0 / d) * (0.8 + unit_uniform(rng()));
            std::vector<double> x(static_cast<std::size_t>(m * d));
            for (auto& v : x) {
                v = (unit_uniform(rng()) - 0.5) * side;
            }
            const double u = energy_of(p, d, x);
            if (B) {
                worst_b = std::min(worst_b, u + m * *B);
            }
            if (Bbar) {
                worst_bbar = std::min(worst_bbar, u + (m - 1) * Bbar->value);
            }
        }
        if (B) {
            add({"random_U_ge_minus_nB", true, worst_b >= -tol,
                 std::to_string(opts.trials) + " trials, min(U+nB)=" + fmt(worst_b)});
        }
        if (Bbar) {
            add({"random_U_ge_minus_n_minus_1_Bbar", true, worst_bbar >= -tol,
                 std::to_string(opts.trials) + " trials, min(U+(n-1)Bbar)=" + fmt(worst_bbar)});
        }
    }

    if (B) {
        const double cap = (d + 1.0) / d * *B;
        const bool ok_est = est.Bbar_n <= cap * (1.0 + tol) + tol;
        const bool ok_known = !Bbar || Bbar->value <= cap * (1.0 + tol) + tol;
        add({"basuev_cap_general", true, ok_est && ok_known,
             "(d+1)/d*B=" + fmt(cap) + " Bbar_n=" + fmt(est.Bbar_n) +
                 (Bbar ? " Bbar=" + fmt(Bbar->value) : std::string())});

        const auto& depth = p.traits().well_depth;
        const bool well = depth && *depth > 0.0;
        const double wcap = well_cap_factor(d) * *B;
        const bool ok_w = est.Bbar_n <= wcap * (1.0 + tol) + tol &&
                          (!Bbar || Bbar->value <= wcap * (1.0 + tol) + tol);
        add({"basuev_cap_well", well, ok_w,
             "c_d*B=" + fmt(wcap) + " Bbar_n=" + fmt(est.Bbar_n) +
                 (Bbar ? " Bbar=" + fmt(Bbar->value) : std::string())});
    }
    return report;
}

}  // namespace vb
