#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "virialbound/analysis.hpp"
#include "virialbound/cli.hpp"
#include "virialbound/cluster.hpp"
#include "virialbound/errors.hpp"
#include "virialbound/graphs.hpp"
#include "virialbound/stability.hpp"

namespace py = pybind11;
using namespace vb;

namespace {

Configuration to_config(const std::vector<std::vector<double>>& points) {
    if (points.empty()) {
        throw InvalidInput("configuration needs at least one point");
    }
    const auto d = points.front().size();
    std::vector<double> flat;
    for (const auto& p : points) {
        if (p.size() != d) {
            throw InvalidInput("all points must have the same dimension");
        }
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return Configuration(static_cast<int>(d), std::move(flat));
}

std::vector<std::vector<double>> from_config(const Configuration& c) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < c.size(); ++i) {
        const auto p = c.point(i);
        out.emplace_back(p.begin(), p.end());
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cluster-expansion bounds for classical gases";

    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<UnsupportedPotential>(m, "UnsupportedPotential", PyExc_ValueError);
    py::register_exception<TemperednessError>(m, "TemperednessError", PyExc_ArithmeticError);

    py::class_<PairPotential>(m, "PairPotential")
        .def("__call__", &PairPotential::evaluate, py::arg("r"))
        .def("evaluate", &PairPotential::evaluate, py::arg("r"))
        .def_property_readonly("kind", &PairPotential::kind)
        .def_property_readonly("dimension", &PairPotential::dimension)
        .def_property_readonly("known_B", &PairPotential::known_B)
        .def_property_readonly("known_Bbar", [](const PairPotential& p) -> std::optional<double> {
            return p.known_Bbar() ? std::optional<double>(p.known_Bbar()->value) : std::nullopt;
        })
        .def_property_readonly("bbar_is_upper_bound", [](const PairPotential& p) {
            return p.known_Bbar() && p.known_Bbar()->is_upper_bound;
        })
        .def("__repr__", [](const PairPotential& p) {
            return "<PairPotential " + p.kind() + " d=" + std::to_string(p.dimension()) + ">";
        });

    m.def("lennard_jones", &catalog::lennard_jones);
    m.def("hard_sphere", &catalog::hard_sphere, py::arg("diameter") = 1.0, py::arg("dimension") = 3);
    m.def("square_well", &catalog::square_well, py::arg("core"), py::arg("range"), py::arg("depth"),
          py::arg("dimension"));
    m.def(
        "tabulated",
        [](std::vector<double> r, std::vector<double> v, int d) { return catalog::tabulated(std::move(r), std::move(v), d); },
        py::arg("radius"), py::arg("energy"), py::arg("dimension") = 3);
    m.def(
        "potential_from_json",
        [](const std::string& text) { return cli::potential_from_json(nlohmann::json::parse(text)); },
        py::arg("description"));

    m.def("mayer_f", &mayer_f, py::arg("potential"), py::arg("beta"), py::arg("r"));
    m.def("abs_mayer_f", &abs_mayer_f, py::arg("potential"), py::arg("beta"), py::arg("r"));

    m.def("connected_graph_count", [](int n) { return enumerate_connected(n).size(); }, py::arg("n"));
    m.def("tree_count", [](int n) { return enumerate_trees(n).size(); }, py::arg("n"));
    m.def(
        "verify_partition",
        [](int n, const std::vector<double>& weights) {
            const auto r = verify_partition(n, build_edge_order(n, weights));
            py::dict d;
            d["passed"] = r.passed;
            d["connected_graphs"] = r.connected_graphs;
            d["trees"] = r.trees;
            d["interval_total"] = r.interval_total;
            d["counterexample"] = r.counterexample;
            return d;
        },
        py::arg("n"), py::arg("weights"));

    m.def(
        "pair_energy_sum", [](const PairPotential& p, const std::vector<std::vector<double>>& x) {
            return pair_energy_sum(p, to_config(x));
        },
        py::arg("potential"), py::arg("points"));
    m.def(
        "ursell_direct",
        [](const PairPotential& p, double beta, const std::vector<std::vector<double>>& x) {
            return ursell_direct(p, beta, to_config(x));
        },
        py::arg("potential"), py::arg("beta"), py::arg("points"));
    m.def(
        "penrose_tree_sum",
        [](const PairPotential& p, double beta, const std::vector<std::vector<double>>& x) {
            return penrose_tree_sum(p, beta, to_config(x));
        },
        py::arg("potential"), py::arg("beta"), py::arg("points"));
    m.def(
        "mayer_coefficient_mc",
        [](const PairPotential& p, double beta, int n, double side, std::uint64_t samples, std::uint64_t seed,
           unsigned workers) {
            py::gil_scoped_release release;
            const auto e = mayer_coefficient_mc(p, beta, n, Box{side, p.dimension()}, {samples, seed, workers});
            return std::make_pair(e.value, e.std_error);
        },
        py::arg("potential"), py::arg("beta"), py::arg("n"), py::arg("box_side"), py::arg("samples"),
        py::arg("seed") = 1, py::arg("workers") = 1);
    m.def("bound_penrose_ruelle", &bound_penrose_ruelle, py::arg("n"), py::arg("beta"), py::arg("B"), py::arg("C"));
    m.def("bound_py", &bound_py, py::arg("n"), py::arg("beta"), py::arg("B"), py::arg("Ctilde"));
    m.def("bound_py_basuev", &bound_py_basuev, py::arg("n"), py::arg("beta"), py::arg("Bbar"), py::arg("Ctilde"));

    m.def("integral_C", [](const PairPotential& p, double beta) { return integral_C(p, beta).value; },
          py::arg("potential"), py::arg("beta"));
    m.def("integral_Ctilde", [](const PairPotential& p, double beta) { return integral_Ctilde(p, beta).value; },
          py::arg("potential"), py::arg("beta"));
    m.def("g_function", &g_function, py::arg("u"));
    m.def("tree_function_w", &tree_function_w, py::arg("x"));
    m.def("euler_series_partial", &euler_series_partial, py::arg("x"), py::arg("terms"));
    m.def("radius_mayer", &radius_mayer, py::arg("beta"), py::arg("B"), py::arg("Ctilde"));
    m.def("radius_lp", &radius_lp, py::arg("beta"), py::arg("B"), py::arg("C"));
    m.def("radius_virial_new", &radius_virial_new, py::arg("beta"), py::arg("Bbar"), py::arg("Ctilde"));
    m.def(
        "radii_report",
        [](const PairPotential& p, double beta) {
            const auto r = build_radii_report(p, beta);
            py::dict d;
            d["beta"] = r.beta;
            d["B"] = r.B;
            d["Bbar"] = r.Bbar;
            d["Bbar_is_upper_bound"] = r.bbar_is_upper_bound;
            d["C"] = r.c.value;
            d["Ctilde"] = r.ctilde.value;
            d["g_1"] = r.g_one;
            d["g_lp"] = r.g_lp;
            d["R_mayer"] = r.radius_mayer;
            d["R_LP"] = r.radius_lp;
            d["R_virial"] = r.radius_virial;
            d["ratio"] = r.ratio;
            return d;
        },
        py::arg("potential"), py::arg("beta"));

    m.def(
        "estimate_Bn",
        [](const PairPotential& p, int n, int starts, std::uint64_t seed, unsigned workers) {
            StabilityEstimate e;
            {
                py::gil_scoped_release release;
                e = estimate_Bn(p, n, {starts, seed, workers, 20000});
            }
            py::dict d;
            d["n"] = e.n;
            d["energy"] = e.energy;
            d["B_n"] = e.Bn;
            d["Bbar_n"] = e.Bbar_n;
            d["best"] = from_config(e.best);
            return d;
        },
        py::arg("potential"), py::arg("n"), py::arg("starts") = 16, py::arg("seed") = 1, py::arg("workers") = 1);
    m.def(
        "simplex_configuration", [](int d, double side) { return from_config(simplex_configuration(d, side)); },
        py::arg("dimension"), py::arg("side") = 1.0);

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_json) {
            cli::CommandResult r;
            try {
                const auto cfg = cli::config_from_json(nlohmann::json::parse(config_json));
                py::gil_scoped_release release;
                r = cli::run_command(command, cfg);
            } catch (const nlohmann::json::parse_error& e) {
                r = {cli::kValidationError, "", e.what()};
            } catch (const std::exception& e) {
                r = {cli::kValidationError, "", e.what()};
            }
            return py::make_tuple(r.exit_code, r.report, r.diagnostics);
        },
        py::arg("command"), py::arg("config_json") = "{}");
}
