#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "virialbound/graphs.hpp"
#include "virialbound/potentials.hpp"

namespace vb {

// n points in R^d stored row-major.
class Configuration {
public:
    Configuration(int dimension, std::vector<double> coords);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] int dimension() const noexcept { return d_; }
    [[nodiscard]] std::span<const double> point(int i) const {
        return {coords_.data() + static_cast<std::ptrdiff_t>(i) * d_, static_cast<std::size_t>(d_)};
    }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] double distance(int i, int j) const;

private:
    int d_;
    int n_;
    std::vector<double> coords_;
};

// Lambda = [-L/2, L/2]^d.
struct Box {
    double side = 1.0;
    int dimension = 3;

    [[nodiscard]] double volume() const;
};

struct MayerEstimate {
    int n = 0;
    double beta = 0.0;
    Box box;
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// V(|x_i - x_j|) for every edge of K_n, in edge-index order.
[[nodiscard]] std::vector<double> pair_energies(const PairPotential& p, const Configuration& c);

// U = sum_{i<j} V(|x_i - x_j|); +inf on any hard-core overlap.
[[nodiscard]] double pair_energy_sum(const PairPotential& p, const Configuration& c);

// Sum over connected graphs g of prod_{e in g} f_e, n <= 6. n = 1 gives 1.
[[nodiscard]] double ursell_direct(const PairPotential& p, double beta, const Configuration& c);

// The same quantity as a sum over trees t of
//   exp(-beta sum_{M(t) \ t} V) * prod_{e in t} f_e
// with M the Kruskal partition scheme for the configuration's edge order.
// n <= 8.
[[nodiscard]] double penrose_tree_sum(const PairPotential& p, double beta, const Configuration& c);
[[nodiscard]] double penrose_tree_sum(const PairPotential& p, double beta, const Configuration& c,
                                      const EdgeOrder& order);

// Sum over trees of exp(-beta sum_{M(t) \ t+} V) prod_{e in t} (1 - e^{-beta|V|}),
// where t+ are the tree edges with V >= 0. Bounds |ursell_direct|.
[[nodiscard]] double penrose_absolute_bound(const PairPotential& p, double beta,
                                            const Configuration& c);

// e^{beta Bbar (n-1)} sum over trees of prod (1 - e^{-beta|V|}); bounds the
// previous quantity whenever Bbar is a valid Basuev constant.
[[nodiscard]] double basuev_tree_bound(const PairPotential& p, double beta, double bbar,
                                       const Configuration& c);

// sum_{M(t) \ t+} V + Bbar (n-1) using the potential's known B-bar. Throws
// UnsupportedPotential when B-bar is missing.
[[nodiscard]] double lemma2_gap(const PairPotential& p, const Configuration& c,
                                const LabeledTree& tree, const EdgeOrder& order);

// Edge order of K_n from the configuration's pair energies.
[[nodiscard]] EdgeOrder configuration_order(const PairPotential& p, const Configuration& c);

struct MonteCarloOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

// Plain Monte Carlo for C_n(beta, Lambda): all n points uniform in the box,
// mean Ursell function times |Lambda|^{n-1} / n!. Samples are split into
// fixed blocks with per-block seeds, so the result does not depend on the
// worker count.
[[nodiscard]] MayerEstimate mayer_coefficient_mc(const PairPotential& p, double beta, int n,
                                                 const Box& box, const MonteCarloOptions& opts);

// |C_n| <= e^{2 beta B (n-2)} n^{n-2}/n! C^{n-1}. n = 1 gives 1.
[[nodiscard]] double bound_penrose_ruelle(int n, double beta, double B, double C);
// |C_n| <= e^{beta B n} n^{n-2}/n! Ctilde^{n-1}.
[[nodiscard]] double bound_py(int n, double beta, double B, double Ctilde);
// |C_n| <= e^{beta Bbar (n-1)} n^{n-2}/n! Ctilde^{n-1}.
[[nodiscard]] double bound_py_basuev(int n, double beta, double Bbar, double Ctilde);

}  // namespace vb
