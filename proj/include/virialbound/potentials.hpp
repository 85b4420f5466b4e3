#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vb {

// Basuev stability constant, or a published upper bound for it.
struct BasuevConstant {
    double value = 0.0;
    bool is_upper_bound = false;
};

// |V(r)| <= amplitude * r^{-exponent} for r >= from_radius. Lets the
// quadrature bound the contribution beyond its cutoff analytically.
struct PowerTail {
    double amplitude = 0.0;
    double exponent = 0.0;
    double from_radius = 0.0;
};

// Everything about a radial pair potential except its energy function.
struct PotentialTraits {
    std::string kind = "custom";
    int dimension = 3;
    std::optional<double> known_B;
    std::optional<BasuevConstant> known_Bbar;
    std::optional<double> well_depth;   // -inf V
    std::optional<double> well_radius;  // argmin V
    // V = +inf for r < hard_core_radius.
    double hard_core_radius = 0.0;
    // V = 0 exactly for r >= support_radius.
    std::optional<double> support_radius;
    std::optional<PowerTail> tail;
    // Points where the integrand of C / C-tilde has a kink or jump.
    std::vector<double> breakpoints;
    // V reaches its negative minimum at well_radius and is negative beyond.
    bool negative_beyond_well = false;
};

// Immutable radial pair potential V(|x|) in d dimensions. Copies share the
// energy function; instances are safe to use from several threads.
class PairPotential {
public:
    using EnergyFn = std::function<double(double)>;

    PairPotential(PotentialTraits traits, EnergyFn energy);

    // V(r). Throws DomainError for r < 0 or NaN. May return +inf, never NaN.
    [[nodiscard]] double evaluate(double r) const;

    [[nodiscard]] const PotentialTraits& traits() const noexcept { return traits_; }
    [[nodiscard]] const std::string& kind() const noexcept { return traits_.kind; }
    [[nodiscard]] int dimension() const noexcept { return traits_.dimension; }
    [[nodiscard]] const std::optional<double>& known_B() const noexcept { return traits_.known_B; }
    [[nodiscard]] const std::optional<BasuevConstant>& known_Bbar() const noexcept {
        return traits_.known_Bbar;
    }
    [[nodiscard]] double hard_core_radius() const noexcept { return traits_.hard_core_radius; }

    // Same energy function with replaced stability constants.
    [[nodiscard]] PairPotential with_constants(std::optional<double> known_B,
                                               std::optional<BasuevConstant> known_Bbar) const;

    // Typical interparticle distance: well radius, else hard core, else 1.
    [[nodiscard]] double length_scale() const noexcept;

private:
    PairPotential(PotentialTraits traits, std::shared_ptr<const EnergyFn> energy);

    PotentialTraits traits_;
    std::shared_ptr<const EnergyFn> energy_;
};

[[nodiscard]] inline double evaluate(const PairPotential& p, double r) { return p.evaluate(r); }

// e^{-beta V} - 1 from an energy value; V = +inf gives exactly -1.
[[nodiscard]] double mayer_factor(double beta, double energy);
// 1 - e^{-beta |V|} from an energy value; V = +inf gives exactly 1.
[[nodiscard]] double abs_mayer_factor(double beta, double energy);

[[nodiscard]] double mayer_f(const PairPotential& p, double beta, double r);
[[nodiscard]] double abs_mayer_f(const PairPotential& p, double beta, double r);

namespace catalog {

// V(r) = r^{-12} - 2 r^{-6} in d = 3: well depth 1 at r0 = 1, B = 8.61 and
// B-bar <= 1.001 B from the cluster-energy tables.
[[nodiscard]] PairPotential lennard_jones();

// Hard spheres of diameter a; B = B-bar = 0.
[[nodiscard]] PairPotential hard_sphere(double diameter, int dimension = 3);

// Hard core a, attractive well of depth epsilon on [a, R), zero beyond.
// In d = 1 with R <= 2a only neighbouring rods interact, so U >= -(n-1) eps
// and the catalog records B = B-bar = eps.
[[nodiscard]] PairPotential square_well(double core, double range, double depth, int dimension);

// Piecewise-linear interpolation through (radius[i], energy[i]); constant
// below the first knot, zero beyond the last. Optional stability constants
// are attached as given.
[[nodiscard]] PairPotential tabulated(std::vector<double> radius, std::vector<double> energy,
                                      int dimension, std::optional<double> known_B = {},
                                      std::optional<BasuevConstant> known_Bbar = {});

}  // namespace catalog

}  // namespace vb
