#include "virialbound/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "virialbound/errors.hpp"
#include "virialbound/numeric.hpp"

namespace vb {

PairPotential::PairPotential(PotentialTraits traits, EnergyFn energy)
    : PairPotential(std::move(traits), std::make_shared<const EnergyFn>(std::move(energy))) {}

PairPotential::PairPotential(PotentialTraits traits, std::shared_ptr<const EnergyFn> energy)
    : traits_(std::move(traits)), energy_(std::move(energy)) {
    if (traits_.dimension < 1) {
        throw InvalidInput("potential dimension must be >= 1");
    }
    if (!*energy_) {
        throw InvalidInput("potential needs an energy function");
    }
    if (traits_.known_B && *traits_.known_B < 0.0) {
        throw InvalidInput("known B must be nonnegative");
    }
    if (traits_.known_Bbar && traits_.known_Bbar->value < 0.0) {
        throw InvalidInput("known B-bar must be nonnegative");
    }
    if (traits_.known_B && traits_.known_Bbar && traits_.known_Bbar->value < *traits_.known_B) {
        throw InvalidInput("known B-bar must not be smaller than known B");
    }
    if (!(traits_.hard_core_radius >= 0.0)) {
        throw InvalidInput("hard-core radius must be >= 0");
    }
    std::sort(traits_.breakpoints.begin(), traits_.breakpoints.end());
}

double PairPotential::evaluate(double r) const {
    if (!(r >= 0.0)) {
        throw DomainError("pair distance must be >= 0");
    }
    if (r < traits_.hard_core_radius) {
        return kInf;
    }
    if (traits_.support_radius && r >= *traits_.support_radius) {
        return 0.0;
    }
    const double v = (*energy_)(r);
    if (std::isnan(v) || v == -kInf) {
        std::ostringstream msg;
        msg << "potential '" << traits_.kind << "' returned " << v << " at r = " << r;
        throw InvalidInput(msg.str());
    }
    return v;
}

PairPotential PairPotential::with_constants(std::optional<double> known_B,
                                            std::optional<BasuevConstant> known_Bbar) const {
    PotentialTraits t = traits_;
    t.known_B = known_B;
    t.known_Bbar = known_Bbar;
    return PairPotential(std::move(t), energy_);
}

double PairPotential::length_scale() const noexcept {
    if (traits_.well_radius && *traits_.well_radius > 0.0) {
        return *traits_.well_radius;
    }
    if (traits_.hard_core_radius > 0.0) {
        return traits_.hard_core_radius;
    }
    return 1.0;
}

double mayer_factor(double beta, double energy) {
    if (energy == kInf) {
        return -1.0;
    }
    return std::expm1(-beta * energy);
}

double abs_mayer_factor(double beta, double energy) {
    if (energy == kInf) {
        return 1.0;
    }
    return -std::expm1(-beta * std::abs(energy));
}

double mayer_f(const PairPotential& p, double beta, double r) {
    if (!(beta > 0.0)) {
        throw DomainError("beta must be > 0");
    }
    return mayer_factor(beta, p.evaluate(r));
}

double abs_mayer_f(const PairPotential& p, double beta, double r) {
    if (!(beta > 0.0)) {
        throw DomainError("beta must be > 0");
    }
    return abs_mayer_factor(beta, p.evaluate(r));
}

namespace catalog {

PairPotential lennard_jones() {
    PotentialTraits t;
    t.kind = "lennard_jones";
    t.dimension = 3;
    t.known_B = 8.61;
    t.known_Bbar = BasuevConstant{1.001 * 8.61, true};
    t.well_depth = 1.0;
    t.well_radius = 1.0;
    t.tail = PowerTail{2.0, 6.0, 1.0};
    t.breakpoints = {std::pow(2.0, -1.0 / 6.0), 1.0};
    t.negative_beyond_well = true;
    return PairPotential(std::move(t), [](double r) {
        if (r == 0.0) {
            return kInf;
        }
        const double s = std::pow(r, -6.0);
        return s * (s - 2.0);
    });
}

PairPotential hard_sphere(double diameter, int dimension) {
    if (!(diameter > 0.0)) {
        throw InvalidInput("hard-sphere diameter must be > 0");
    }
    PotentialTraits t;
    t.kind = "hard_sphere";
    t.dimension = dimension;
    t.known_B = 0.0;
    t.known_Bbar = BasuevConstant{0.0, false};
    t.well_depth = 0.0;
    t.hard_core_radius = diameter;
    t.support_radius = diameter;
    t.breakpoints = {diameter};
    return PairPotential(std::move(t), [](double) { return 0.0; });
}

PairPotential square_well(double core, double range, double depth, int dimension) {
    if (!(core > 0.0) || !(range > core) || !(depth >= 0.0)) {
        throw InvalidInput("square well needs 0 < core < range and depth >= 0");
    }
    PotentialTraits t;
    t.kind = "square_well";
    t.dimension = dimension;
    t.well_depth = depth;
    t.well_radius = core;
    t.hard_core_radius = core;
    t.support_radius = range;
    t.breakpoints = {core, range};
    if (dimension == 1 && range <= 2.0 * core) {
        t.known_B = depth;
        t.known_Bbar = BasuevConstant{depth, false};
    }
    return PairPotential(std::move(t), [depth](double) { return -depth; });
}

PairPotential tabulated(std::vector<double> radius, std::vector<double> energy, int dimension,
                        std::optional<double> known_B, std::optional<BasuevConstant> known_Bbar) {
    if (radius.size() < 2 || radius.size() != energy.size()) {
        throw InvalidInput("tabulated potential needs >= 2 knots with one energy each");
    }
    if (!(radius.front() >= 0.0)) {
        throw InvalidInput("tabulated radii must be >= 0");
    }
    for (std::size_t i = 0; i < radius.size(); ++i) {
        if (!std::isfinite(radius[i]) || !std::isfinite(energy[i])) {
            throw InvalidInput("tabulated knots must be finite");
        }
        if (i > 0 && !(radius[i] > radius[i - 1])) {
            throw InvalidInput("tabulated radii must be strictly increasing");
        }
    }
    PotentialTraits t;
    t.kind = "tabulated";
    t.dimension = dimension;
    t.known_B = known_B;
    t.known_Bbar = known_Bbar;
    const auto lowest = std::min_element(energy.begin(), energy.end());
    t.well_depth = std::max(0.0, -*lowest);
    if (*lowest < 0.0) {
        t.well_radius = radius[static_cast<std::size_t>(lowest - energy.begin())];
    }
    t.support_radius = radius.back();
    t.breakpoints = radius;
    // Sign changes inside a segment are kinks of |1 - e^{-beta V}|.
    for (std::size_t i = 1; i < radius.size(); ++i) {
        if ((energy[i - 1] < 0.0 && energy[i] > 0.0) || (energy[i - 1] > 0.0 && energy[i] < 0.0)) {
            const double s = energy[i - 1] / (energy[i - 1] - energy[i]);
            t.breakpoints.push_back(radius[i - 1] + s * (radius[i] - radius[i - 1]));
        }
    }
    return PairPotential(std::move(t), [r = std::move(radius), v = std::move(energy)](double x) {
        if (x <= r.front()) {
            return v.front();
        }
        const auto hi = std::upper_bound(r.begin(), r.end(), x);
        if (hi == r.end()) {
            return v.back();
        }
        const auto k = static_cast<std::size_t>(hi - r.begin());
        const double s = (x - r[k - 1]) / (r[k] - r[k - 1]);
        return v[k - 1] + s * (v[k] - v[k - 1]);
    });
}

}  // namespace catalog

}  // namespace vb
