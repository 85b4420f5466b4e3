#include <cmath>
#include <fstream>
#include <set>

#include "virialbound/cli.hpp"
#include "virialbound/errors.hpp"

namespace vb::cli {
namespace {

using nlohmann::json;

double number(const json& desc, const char* key) {
    if (!desc.contains(key) || !desc.at(key).is_number()) {
        throw InvalidInput(std::string("potential description needs numeric '") + key + "'");
    }
    return desc.at(key).get<double>();
}

double number_or(const json& desc, const char* key, double fallback) {
    return desc.contains(key) ? number(desc, key) : fallback;
}

int dimension_or(const json& desc, int fallback) {
    if (!desc.contains("dimension")) {
        return fallback;
    }
    if (!desc.at("dimension").is_number_integer()) {
        throw InvalidInput("potential 'dimension' must be an integer");
    }
    return desc.at("dimension").get<int>();
}

template <class T>
T get_as(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

PairPotential potential_from_json(const json& desc) {
    if (!desc.is_object() || !desc.contains("kind") || !desc.at("kind").is_string()) {
        throw InvalidInput("potential description must be an object with a string 'kind'");
    }
    const auto kind = desc.at("kind").get<std::string>();
    static const std::set<std::string> common{"kind", "dimension", "known_B", "known_Bbar",
                                              "bbar_is_upper_bound"};
    std::set<std::string> allowed = common;
    std::optional<PairPotential> p;
    if (kind == "lennard_jones") {
        if (dimension_or(desc, 3) != 3) {
            throw InvalidInput("lennard_jones is defined in dimension 3");
        }
        p = catalog::lennard_jones();
    } else if (kind == "hard_sphere") {
        allowed.insert("diameter");
        p = catalog::hard_sphere(number_or(desc, "diameter", 1.0), dimension_or(desc, 3));
    } else if (kind == "square_well") {
        allowed.insert({"core", "range", "depth"});
        p = catalog::square_well(number(desc, "core"), number(desc, "range"), number(desc, "depth"),
                                 dimension_or(desc, 3));
    } else if (kind == "tabulated") {
        allowed.insert({"radius", "energy"});
        if (!desc.contains("radius") || !desc.contains("energy")) {
            throw InvalidInput("tabulated potential needs 'radius' and 'energy' arrays");
        }
        p = catalog::tabulated(get_as<std::vector<double>>(desc, "radius"),
                               get_as<std::vector<double>>(desc, "energy"), dimension_or(desc, 3));
    } else {
        throw InvalidInput("unknown potential kind '" + kind + "'");
    }
    for (const auto& [key, value] : desc.items()) {
        if (!allowed.contains(key)) {
            throw InvalidInput("unknown key '" + key + "' in " + kind + " potential description");
        }
    }
    if (desc.contains("known_B") || desc.contains("known_Bbar")) {
        std::optional<double> b = p->known_B();
        std::optional<BasuevConstant> bbar = p->known_Bbar();
        if (desc.contains("known_B")) {
            b = number(desc, "known_B");
        }
        if (desc.contains("known_Bbar")) {
            const bool upper = desc.value("bbar_is_upper_bound", false);
            bbar = BasuevConstant{number(desc, "known_Bbar"), upper};
        }
        p = p->with_constants(b, bbar);
    }
    return *p;
}

std::vector<double> parse_betas(const json& value) {
    std::vector<double> out;
    if (value.is_number()) {
        out.push_back(value.get<double>());
    } else if (value.is_array()) {
        for (const auto& v : value) {
            if (!v.is_number()) {
                throw InvalidInput("beta list entries must be numbers");
            }
            out.push_back(v.get<double>());
        }
    } else if (value.is_object()) {
        const double start = get_as<double>(value, "start");
        const double stop = get_as<double>(value, "stop");
        const int count = get_as<int>(value, "count");
        const std::string spacing = value.value("spacing", std::string("linear"));
        if (count < 1) {
            throw InvalidInput("beta range needs count >= 1");
        }
        for (int k = 0; k < count; ++k) {
            const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
            if (spacing == "log") {
                if (!(start > 0.0) || !(stop > 0.0)) {
                    throw InvalidInput("log-spaced beta range needs positive endpoints");
                }
                out.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
            } else if (spacing == "linear") {
                out.push_back(start + t * (stop - start));
            } else {
                throw InvalidInput("beta spacing must be 'linear' or 'log'");
            }
        }
    } else {
        throw InvalidInput("beta must be a number, a list, or a range object");
    }
    for (double b : out) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InvalidInput("beta must be finite and > 0");
        }
    }
    return out;
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw InvalidInput("config must be a JSON object");
    }
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "potential") {
            cfg.potential = value;
        } else if (key == "beta") {
            cfg.betas = parse_betas(value);
        } else if (key == "n") {
            cfg.n = value.is_array() ? get_as<std::vector<int>>(doc, "n")
                                     : std::vector<int>{get_as<int>(doc, "n")};
        } else if (key == "box_side") {
            cfg.box_side = get_as<double>(doc, "box_side");
        } else if (key == "samples") {
            cfg.samples = get_as<std::uint64_t>(doc, "samples");
        } else if (key == "seed") {
            cfg.seed = get_as<std::uint64_t>(doc, "seed");
        } else if (key == "starts") {
            cfg.starts = get_as<int>(doc, "starts");
        } else if (key == "out") {
            cfg.out = get_as<std::string>(doc, "out");
        } else if (key == "format") {
            cfg.format = get_as<std::string>(doc, "format");
        } else if (key == "workers") {
            cfg.workers = get_as<unsigned>(doc, "workers");
        } else if (key == "n_max") {
            cfg.n_max = get_as<int>(doc, "n_max");
        } else if (key == "trials") {
            cfg.trials = get_as<int>(doc, "trials");
        } else if (key == "orders") {
            cfg.orders = get_as<int>(doc, "orders");
        } else if (key == "orders_n6") {
            cfg.orders_n6 = get_as<int>(doc, "orders_n6");
        } else if (key == "check_trials") {
            cfg.check_trials = get_as<int>(doc, "check_trials");
        } else if (key == "u_min") {
            cfg.u_min = get_as<double>(doc, "u_min");
        } else if (key == "u_max") {
            cfg.u_max = get_as<double>(doc, "u_max");
        } else if (key == "u_count") {
            cfg.u_count = get_as<int>(doc, "u_count");
        } else if (key == "x_count") {
            cfg.x_count = get_as<int>(doc, "x_count");
        } else {
            throw InvalidInput("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace vb::cli
