#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "virialbound/cluster.hpp"
#include "virialbound/potentials.hpp"

namespace vb {

// Lower bounds on B_n = sup(-U/n) and Bbar_n = sup(-U/(n-1)) from the best
// configuration a multi-start search found.
struct StabilityEstimate {
    int n = 0;
    double energy = 0.0;  // lowest U found
    double Bn = 0.0;
    double Bbar_n = 0.0;
    Configuration best{1, {0.0}};
    int starts = 0;
    std::uint64_t iterations = 0;
    std::uint64_t seed = 0;
};

struct StabilityOptions {
    int starts = 16;  // random starts, on top of the lattice/simplex witnesses
    std::uint64_t seed = 1;
    unsigned workers = 1;
    int max_iterations = 20000;  // per Nelder-Mead run
};

// Multi-start Nelder-Mead minimization of U over R^{dn}. Moves into a hard
// core are rejected (U = +inf never wins a comparison). Throws DomainError
// for n < 2.
[[nodiscard]] StabilityEstimate estimate_Bn(const PairPotential& p, int n,
                                            const StabilityOptions& opts);

// Regular simplex with `vertices` points and unit edge `side`, embedded in
// R^dimension (needs vertices <= dimension + 1).
[[nodiscard]] Configuration regular_simplex(int vertices, int dimension, double side);
// The d-dimensional hypertetrahedron: d + 1 points, all pairwise distances
// equal to side.
[[nodiscard]] Configuration simplex_configuration(int dimension, double side);

struct LatticePatch {
    Configuration config{1, {0.0}};
    int center = 0;               // index of the central site
    std::size_t unit_pairs = 0;   // pairs at nearest-neighbour distance 1
};

// Chain (d = 1), triangular (d = 2) or FCC (d = 3) patch with unit
// nearest-neighbour spacing, sites sorted by distance from the centre.
// `shells` is the lattice-step radius of the patch.
[[nodiscard]] LatticePatch close_packed_patch(int dimension, int shells);

// Number of pairs whose distance is within tol of `distance`.
[[nodiscard]] std::size_t count_pairs_at(const Configuration& c, double distance, double tol = 1e-9);
// Number of sites within tol of `distance` from site i.
[[nodiscard]] int coordination(const Configuration& c, int site, double distance, double tol = 1e-9);

struct InequalityCheck {
    std::string name;
    bool applicable = true;
    bool passed = true;
    std::string detail;
};

struct StabilityCheckReport {
    bool passed = true;  // all applicable checks passed
    std::vector<InequalityCheck> checks;
};

struct CheckOptions {
    int trials = 10000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
};

// Confronts an estimate and random configurations with the stability
// inequalities U >= -nB, U >= -(n-1)Bbar and the caps Bbar <= (d+1)/d B and,
// for potentials with an attractive well, the close-packing cap.
[[nodiscard]] StabilityCheckReport check_stability_inequalities(const StabilityEstimate& est,
                                                                const PairPotential& p,
                                                                const CheckOptions& opts);

// Cap factor c_d with Bbar <= c_d B for well-shaped potentials: 3/2, 7/6,
// (2d(d-1)+1)/(2d(d-1)).
[[nodiscard]] double well_cap_factor(int dimension);

}  // namespace vb
