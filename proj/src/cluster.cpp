#include "virialbound/cluster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "virialbound/errors.hpp"
#include "virialbound/numeric.hpp"
#include "virialbound/parallel.hpp"

namespace vb {
namespace {

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be a finite positive number");
    }
}

void check_dimension(const PairPotential& p, const Configuration& c) {
    if (p.dimension() != c.dimension()) {
        throw InvalidInput("configuration dimension differs from potential dimension");
    }
}

double product_over(EdgeMask mask, std::span<const double> factor) {
    double prod = 1.0;
    for (EdgeMask m = mask; m != 0; m &= m - 1) {
        prod *= factor[static_cast<std::size_t>(std::countr_zero(m))];
    }
    return prod;
}

// Sum of V over the edges in mask; +inf short-circuits.
double energy_over(EdgeMask mask, std::span<const double> energy) {
    CompensatedSum sum;
    for (EdgeMask m = mask; m != 0; m &= m - 1) {
        const double v = energy[static_cast<std::size_t>(std::countr_zero(m))];
        if (v == kInf) {
            return kInf;
        }
        sum += v;
    }
    return sum.value();
}

EdgeMask nonnegative_edges(EdgeMask mask, std::span<const double> energy) {
    EdgeMask out = 0;
    for (EdgeMask m = mask; m != 0; m &= m - 1) {
        const int e = std::countr_zero(m);
        if (energy[static_cast<std::size_t>(e)] >= 0.0) {
            out |= EdgeMask{1} << e;
        }
    }
    return out;
}

std::vector<double> mayer_factors(double beta, std::span<const double> energy) {
    std::vector<double> f(energy.size());
    std::transform(energy.begin(), energy.end(), f.begin(),
                   [beta](double v) { return mayer_factor(beta, v); });
    return f;
}

double ursell_from_factors(int n, std::span<const double> f) {
    if (n == 1) {
        return 1.0;
    }
    CompensatedSum sum;
    for (const auto& g : enumerate_connected(n)) {
        sum += product_over(g.edges(), f);
    }
    return sum.value();
}

// Running mean / M2 (Welford) with Chan's pairwise merge.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.count == 0) {
            return;
        }
        const double total = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / total;
        count += o.count;
    }
};

constexpr std::uint64_t kBlockSize = 1U << 14;

double bound_common(int n, double log_prefactor, double constant) {
    if (n < 1) {
        throw DomainError("coefficient order n must be >= 1");
    }
    if (n == 1) {
        return 1.0;
    }
    if (constant == 0.0) {
        return 0.0;
    }
    const double log_value = log_prefactor + (n - 2) * std::log(static_cast<double>(n)) -
                             log_factorial(n) + (n - 1) * std::log(constant);
    return std::exp(log_value);
}

void check_bound_args(double beta, double b, double c) {
    if (!(beta >= 0.0) || !(b >= 0.0) || !(c >= 0.0)) {
        throw DomainError("bound arguments must be nonnegative");
    }
}

}  // namespace

Configuration::Configuration(int dimension, std::vector<double> coords)
    : d_(dimension), n_(0), coords_(std::move(coords)) {
    if (d_ < 1) {
        throw InvalidInput("configuration dimension must be >= 1");
    }
    if (coords_.empty() || coords_.size() % static_cast<std::size_t>(d_) != 0) {
        throw InvalidInput("configuration needs n >= 1 points of dimension d");
    }
    if (!std::all_of(coords_.begin(), coords_.end(), [](double x) { return std::isfinite(x); })) {
        throw InvalidInput("configuration coordinates must be finite");
    }
    n_ = static_cast<int>(coords_.size() / static_cast<std::size_t>(d_));
}

double Configuration::distance(int i, int j) const {
    const auto a = point(i);
    const auto b = point(j);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double dx = a[k] - b[k];
        s += dx * dx;
    }
    return std::sqrt(s);
}

double Box::volume() const {
    if (!(side > 0.0) || dimension < 1) {
        throw DomainError("box needs side > 0 and dimension >= 1");
    }
    return std::pow(side, dimension);
}

std::vector<double> pair_energies(const PairPotential& p, const Configuration& c) {
    check_dimension(p, c);
    const int n = c.size();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(edge_count(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            v.push_back(p.evaluate(c.distance(i, j)));
        }
    }
    return v;
}

double pair_energy_sum(const PairPotential& p, const Configuration& c) {
    check_dimension(p, c);
    CompensatedSum sum;
    for (int i = 0; i < c.size(); ++i) {
        for (int j = i + 1; j < c.size(); ++j) {
            const double v = p.evaluate(c.distance(i, j));
            if (v == kInf) {
                return kInf;
            }
            sum += v;
        }
    }
    return sum.value();
}

double ursell_direct(const PairPotential& p, double beta, const Configuration& c) {
    check_beta(beta);
    if (c.size() > kMaxExhaustiveVertices) {
        throw CapacityError("ursell_direct: n = " + std::to_string(c.size()) + " exceeds 6");
    }
    const auto f = mayer_factors(beta, pair_energies(p, c));
    return ursell_from_factors(c.size(), f);
}

EdgeOrder configuration_order(const PairPotential& p, const Configuration& c) {
    if (c.size() > kMaxVertices) {
        throw CapacityError("edge orders are limited to n <= 8");
    }
    const auto v = pair_energies(p, c);
    return build_edge_order(c.size(), v);
}

double penrose_tree_sum(const PairPotential& p, double beta, const Configuration& c) {
    return penrose_tree_sum(p, beta, c, configuration_order(p, c));
}

double penrose_tree_sum(const PairPotential& p, double beta, const Configuration& c,
                        const EdgeOrder& order) {
    check_beta(beta);
    const int n = c.size();
    if (n > kMaxVertices) {
        throw CapacityError("penrose_tree_sum: n = " + std::to_string(n) + " exceeds 8");
    }
    if (n == 1) {
        return 1.0;
    }
    const auto v = pair_energies(p, c);
    const auto f = mayer_factors(beta, v);
    CompensatedSum sum;
    for (const auto& tau : enumerate_trees(n)) {
        const double tree_part = product_over(tau.edges(), f);
        if (tree_part == 0.0) {
            continue;
        }
        const EdgeMask extra = scheme_map(tau, order).edges() & ~tau.edges();
        const double u = energy_over(extra, v);
        if (u == kInf) {
            continue;
        }
        sum += std::exp(-beta * u) * tree_part;
    }
    return sum.value();
}

double penrose_absolute_bound(const PairPotential& p, double beta, const Configuration& c) {
    check_beta(beta);
    const int n = c.size();
    if (n > kMaxVertices) {
        throw CapacityError("penrose_absolute_bound: n exceeds 8");
    }
    if (n == 1) {
        return 1.0;
    }
    const auto v = pair_energies(p, c);
    const auto order = build_edge_order(n, v);
    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(),
                   [beta](double x) { return abs_mayer_factor(beta, x); });
    CompensatedSum sum;
    for (const auto& tau : enumerate_trees(n)) {
        const double tree_part = product_over(tau.edges(), a);
        if (tree_part == 0.0) {
            continue;
        }
        const EdgeMask positive = nonnegative_edges(tau.edges(), v);
        const EdgeMask summed = scheme_map(tau, order).edges() & ~positive;
        const double u = energy_over(summed, v);
        if (u == kInf) {
            continue;
        }
        sum += std::exp(-beta * u) * tree_part;
    }
    return sum.value();
}

double basuev_tree_bound(const PairPotential& p, double beta, double bbar, const Configuration& c) {
    check_beta(beta);
    if (!(bbar >= 0.0)) {
        throw DomainError("B-bar must be >= 0");
    }
    const int n = c.size();
    if (n > kMaxVertices) {
        throw CapacityError("basuev_tree_bound: n exceeds 8");
    }
    if (n == 1) {
        return 1.0;
    }
    const auto v = pair_energies(p, c);
    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(),
                   [beta](double x) { return abs_mayer_factor(beta, x); });
    CompensatedSum sum;
    for (const auto& tau : enumerate_trees(n)) {
        sum += product_over(tau.edges(), a);
    }
    return std::exp(beta * bbar * (n - 1)) * sum.value();
}

double lemma2_gap(const PairPotential& p, const Configuration& c, const LabeledTree& tree,
                  const EdgeOrder& order) {
    const auto& bbar = p.known_Bbar();
    if (!bbar) {
        throw UnsupportedPotential("potential '" + p.kind() + "' has no known B-bar");
    }
    const int n = c.size();
    if (tree.vertices() != n || order.vertices() != n) {
        throw StructuralError("tree, order and configuration disagree on n");
    }
    const auto v = pair_energies(p, c);
    const EdgeMask summed = scheme_map(tree, order).edges() & ~nonnegative_edges(tree.edges(), v);
    const double u = energy_over(summed, v);
    if (u == kInf) {
        return kInf;
    }
    return u + bbar->value * (n - 1);
}

MayerEstimate mayer_coefficient_mc(const PairPotential& p, double beta, int n, const Box& box,
                                   const MonteCarloOptions& opts) {
    check_beta(beta);
    if (n < 2 || n > kMaxExhaustiveVertices) {
        throw CapacityError("mayer_coefficient_mc: n = " + std::to_string(n) +
                            " outside supported range [2, 6]");
    }
    if (opts.samples < 2) {
        throw DomainError("need at least 2 samples");
    }
    if (box.dimension != p.dimension()) {
        throw InvalidInput("box dimension differs from potential dimension");
    }
    const double volume = box.volume();
    (void)enumerate_connected(n);

    const std::uint64_t blocks = (opts.samples + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> partial(blocks);
    const int d = box.dimension;
    const std::size_t m = static_cast<std::size_t>(edge_count(n));

    auto run_block = [&](std::uint64_t b) {
        auto rng = stream_rng(opts.seed, b);
        const std::uint64_t begin = b * kBlockSize;
        const std::uint64_t end = std::min(opts.samples, begin + kBlockSize);
        std::vector<double> x(static_cast<std::size_t>(n * d));
        std::vector<double> f(m);
        Moments acc;
        for (std::uint64_t s = begin; s < end; ++s) {
            for (auto& coord : x) {
                coord = (unit_uniform(rng()) - 0.5) * box.side;
            }
            std::size_t k = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    double r2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const double dx = x[static_cast<std::size_t>(i * d + a)] -
                                          x[static_cast<std::size_t>(j * d + a)];
                        r2 += dx * dx;
                    }
                    f[k++] = mayer_factor(beta, p.evaluate(std::sqrt(r2)));
                }
            }
            acc.add(ursell_from_factors(n, f));
        }
        partial[b] = acc;
    };

    parallel_for(blocks, opts.workers, run_block);

    Moments total;
    for (const auto& part : partial) {
        total.merge(part);
    }
    const double scale = std::exp((n - 1) * std::log(volume) - log_factorial(n));
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    MayerEstimate est;
    est.n = n;
    est.beta = beta;
    est.box = box;
    est.value = scale * total.mean;
    est.std_error = scale * std::sqrt(variance / static_cast<double>(total.count));
    est.samples = total.count;
    return est;
}

double bound_penrose_ruelle(int n, double beta, double B, double C) {
    check_bound_args(beta, B, C);
    return bound_common(n, 2.0 * beta * B * (n - 2), C);
}

double bound_py(int n, double beta, double B, double Ctilde) {
    check_bound_args(beta, B, Ctilde);
    return bound_common(n, beta * B * n, Ctilde);
}

double bound_py_basuev(int n, double beta, double Bbar, double Ctilde) {
    check_bound_args(beta, Bbar, Ctilde);
    return bound_common(n, beta * Bbar * (n - 1), Ctilde);
}

}  // namespace vb
