#include <cmath>
#include <cstdio>
#include <sstream>

#include "virialbound/analysis.hpp"
#include "virialbound/cli.hpp"
#include "virialbound/cluster.hpp"
#include "virialbound/errors.hpp"
#include "virialbound/graphs.hpp"
#include "virialbound/numeric.hpp"
#include "virialbound/parallel.hpp"
#include "virialbound/stability.hpp"

namespace vb::cli {
namespace {

using nlohmann::json;

constexpr double kPenroseTolerance = 1e-9;

// A report table that renders as CSV or as a JSON array of row objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<json> row) { rows_.push_back(std::move(row)); }

    [[nodiscard]] std::string csv() const {
        std::ostringstream out;
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            out << (c ? "," : "") << columns_[c];
        }
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << cell(row[c]);
            }
            out << '\n';
        }
        return out.str();
    }

    [[nodiscard]] json rows_json() const {
        json arr = json::array();
        for (const auto& row : rows_) {
            json obj = json::object();
            for (std::size_t c = 0; c < row.size(); ++c) {
                obj[columns_[c]] = row[c];
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }

private:
    static std::string cell(const json& v) {
        if (v.is_null()) {
            return "";
        }
        if (v.is_string()) {
            auto s = v.get<std::string>();
            if (s.find_first_of(",\"\n") != std::string::npos) {
                std::string quoted = "\"";
                for (char ch : s) {
                    quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                }
                return quoted + "\"";
            }
            return s;
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        if (v.is_number_float()) {
            return format_number(v.get<double>());
        }
        return v.dump();
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<json>> rows_;
};

json num(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::string render(const RunConfig& cfg, const std::string& command, const Table& table,
                   json extra = json::object()) {
    if (cfg.format == "csv") {
        return table.csv();
    }
    json doc = json::object();
    doc["command"] = command;
    for (auto& [k, v] : extra.items()) {
        doc[k] = v;
    }
    doc["rows"] = table.rows_json();
    return doc.dump(2) + "\n";
}

void validate_common(const RunConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") {
        throw InvalidInput("format must be 'csv' or 'json'");
    }
    if (cfg.workers < 1) {
        throw InvalidInput("workers must be >= 1");
    }
    for (double b : cfg.betas) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InvalidInput("beta must be finite and > 0");
        }
    }
}

PairPotential required_potential(const RunConfig& cfg) {
    if (!cfg.potential) {
        throw InvalidInput("this command needs a 'potential' in the config");
    }
    return potential_from_json(*cfg.potential);
}

std::vector<std::pair<std::string, PairPotential>> verify_potentials(const RunConfig& cfg) {
    if (cfg.potential) {
        auto p = potential_from_json(*cfg.potential);
        return {{p.kind(), p}};
    }
    return {{"lennard_jones", catalog::lennard_jones()},
            {"square_well_rods", catalog::square_well(1.0, 1.5, 1.0, 1)},
            {"hard_sphere", catalog::hard_sphere(1.0, 3)}};
}

Configuration gaussian_configuration(const PairPotential& p, int n, std::mt19937_64& rng) {
    const int d = p.dimension();
    const double sigma = 0.75 * p.length_scale();
    std::vector<double> x(static_cast<std::size_t>(n * d));
    for (auto& v : x) {
        v = sigma * standard_normal(rng);
    }
    return Configuration(d, std::move(x));
}

// Weight vectors for the partition check. Modes cycle through continuous
// weights, heavy ties, ties with +inf, and all-equal; odd k also use a random
// tie-break key.
EdgeOrder random_order(int n, int k, std::uint64_t seed) {
    auto rng = stream_rng(seed, 0x5041525400ULL + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
    const auto m = static_cast<std::size_t>(edge_count(n));
    std::vector<double> w(m);
    for (auto& x : w) {
        switch (k % 4) {
            case 0: x = standard_normal(rng); break;
            case 1: x = static_cast<double>(rng() % 3); break;
            case 2: {
                const auto r = rng() % 4;
                x = r == 3 ? kInf : static_cast<double>(r);
                break;
            }
            default: x = 1.0; break;
        }
    }
    std::vector<int> tie;
    if (k % 2 == 1) {
        tie.resize(m);
        for (auto& t : tie) {
            t = static_cast<int>(rng() % 1000);
        }
    }
    return build_edge_order(n, w, tie);
}

std::string fmt_int(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CommandResult cmd_radii(const RunConfig& cfg) {
    validate_common(cfg);
    const PairPotential p = required_potential(cfg);
    if (cfg.betas.empty()) {
        throw InvalidInput("radii needs at least one beta");
    }
    if (!p.known_B()) {
        throw UnsupportedPotential("potential '" + p.kind() + "' is missing known_B");
    }
    if (!p.known_Bbar()) {
        throw UnsupportedPotential("potential '" + p.kind() + "' is missing known_Bbar");
    }
    std::vector<RadiiReport> reports(cfg.betas.size());
    parallel_for(cfg.betas.size(), cfg.workers,
                 [&](std::uint64_t i) { reports[i] = build_radii_report(p, cfg.betas[i]); });

    Table table({"beta", "B", "Bbar", "Bbar_is_upper_bound", "C", "C_abs_error", "Ctilde",
                 "Ctilde_abs_error", "g_1", "g_lp", "R_mayer", "R_LP", "R_virial", "ratio",
                 "conservative"});
    for (const auto& r : reports) {
        table.add({num(r.beta), num(r.B), num(r.Bbar), r.bbar_is_upper_bound, num(r.c.value),
                   num(r.c.abs_error), num(r.ctilde.value), num(r.ctilde.abs_error), num(r.g_one),
                   num(r.g_lp), num(r.radius_mayer), num(r.radius_lp), num(r.radius_virial),
                   num(r.ratio), r.bbar_is_upper_bound});
    }
    CommandResult res;
    res.report = render(cfg, "radii", table, {{"potential", p.kind()}});
    return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
    validate_common(cfg);
    if (cfg.n_max < 2) {
        throw InvalidInput("n_max must be >= 2");
    }
    if (cfg.trials < 0 || cfg.orders < 0 || cfg.orders_n6 < 0) {
        throw InvalidInput("trials and orders must be >= 0");
    }
    const auto potentials = verify_potentials(cfg);
    const std::vector<double> betas = cfg.betas.empty() ? std::vector<double>{1.0} : cfg.betas;

    Table table({"check", "potential", "beta", "n", "cases", "violations", "worst", "status", "detail"});
    bool any_violation = false;
    bool any_capacity = false;
    auto status = [&](std::uint64_t violations) {
        any_violation = any_violation || violations > 0;
        return violations > 0 ? "fail" : "pass";
    };
    auto capacity_row = [&](const std::string& check, const std::string& pot, json beta, int n,
                            const std::string& why) {
        any_capacity = true;
        table.add({check, pot, std::move(beta), n, 0, 0, nullptr, "capacity", why});
    };

    // Partition scheme over random edge orders.
    for (int n = 2; n <= cfg.n_max; ++n) {
        if (n > kMaxExhaustiveVertices) {
            capacity_row("partition", "", nullptr, n, "exhaustive graph scans are capped at n = 6");
            continue;
        }
        const int count = n == kMaxExhaustiveVertices ? cfg.orders_n6 : cfg.orders;
        std::vector<PartitionReport> reports(static_cast<std::size_t>(count));
        parallel_for(reports.size(), cfg.workers, [&](std::uint64_t k) {
            reports[k] = verify_partition(n, random_order(n, static_cast<int>(k), cfg.seed));
        });
        std::uint64_t failures = 0;
        std::string detail = "|G_n|=" + fmt_int(reports.empty() ? enumerate_connected(n).size()
                                                                : reports.front().connected_graphs);
        for (const auto& r : reports) {
            if (!r.passed) {
                if (failures++ == 0) {
                    detail += "; " + r.counterexample.value_or("");
                }
            }
        }
        if (!reports.empty()) {
            detail += " interval_sum=" + fmt_int(reports.front().interval_total);
        }
        table.add({"partition", "", nullptr, n, count, failures, nullptr, status(failures), detail});
    }

    for (std::size_t pi = 0; pi < potentials.size(); ++pi) {
        const auto& [name, p] = potentials[pi];
        const bool has_bbar = p.known_Bbar().has_value();
        for (double beta : betas) {
            for (int n = 2; n <= cfg.n_max; ++n) {
                if (n > kMaxExhaustiveVertices) {
                    capacity_row("penrose_identity", name, num(beta), n,
                                 "direct Ursell sums are capped at n = 6");
                    continue;
                }
                struct Trial {
                    double deviation = 0.0;
                    bool chain_ok = true;
                };
                std::vector<Trial> out(static_cast<std::size_t>(cfg.trials));
                parallel_for(out.size(), cfg.workers, [&](std::uint64_t t) {
                    auto rng = stream_rng(cfg.seed, 0x50454E00ULL + pi * 64 + static_cast<std::uint64_t>(n), t);
                    const auto c = gaussian_configuration(p, n, rng);
                    const double direct = ursell_direct(p, beta, c);
                    const double trees = penrose_tree_sum(p, beta, c);
                    out[t].deviation = std::abs(direct - trees) / std::max(1.0, std::abs(direct));
                    const double a3 = penrose_absolute_bound(p, beta, c);
                    bool ok = std::abs(direct) <= a3 * (1.0 + 1e-12) + 1e-12;
                    if (has_bbar) {
                        const double a4 = basuev_tree_bound(p, beta, p.known_Bbar()->value, c);
                        ok = ok && a3 <= a4 * (1.0 + 1e-12) + 1e-12;
                    }
                    out[t].chain_ok = ok;
                });
                double worst = 0.0;
                std::uint64_t bad = 0;
                std::uint64_t chain_bad = 0;
                for (const auto& t : out) {
                    worst = std::max(worst, t.deviation);
                    bad += t.deviation > kPenroseTolerance ? 1 : 0;
                    chain_bad += t.chain_ok ? 0 : 1;
                }
                table.add({"penrose_identity", name, num(beta), n, cfg.trials, bad, num(worst),
                           status(bad), "max relative deviation, tolerance 1e-9"});
                table.add({"tree_bound_chain", name, num(beta), n, cfg.trials, chain_bad, nullptr,
                           status(chain_bad),
                           has_bbar ? "|ursell| <= absolute tree bound <= Basuev tree bound"
                                    : "|ursell| <= absolute tree bound"});
            }
        }

        if (!has_bbar) {
            table.add({"lemma2", name, nullptr, 0, 0, 0, nullptr, "skipped", "known_Bbar missing"});
            continue;
        }
        const double bbar = p.known_Bbar()->value;
        for (int n = 2; n <= cfg.n_max; ++n) {
            if (n > kMaxVertices) {
                capacity_row("lemma2", name, nullptr, n, "tree enumeration is capped at n = 8");
                continue;
            }
            const auto& trees = enumerate_trees(n);
            std::vector<double> min_gap(static_cast<std::size_t>(cfg.trials), kInf);
            std::vector<std::uint64_t> bad(static_cast<std::size_t>(cfg.trials), 0);
            parallel_for(min_gap.size(), cfg.workers, [&](std::uint64_t t) {
                auto rng = stream_rng(cfg.seed, 0x4C454D00ULL + pi * 64 + static_cast<std::uint64_t>(n), t);
                const auto c = gaussian_configuration(p, n, rng);
                const auto order = configuration_order(p, c);
                for (const auto& tau : trees) {
                    const double gap = lemma2_gap(p, c, tau, order);
                    min_gap[t] = std::min(min_gap[t], gap);
                    bad[t] += gap < -1e-12 * (n - 1) * bbar ? 1 : 0;
                }
            });
            double worst = kInf;
            std::uint64_t violations = 0;
            for (std::size_t t = 0; t < min_gap.size(); ++t) {
                worst = std::min(worst, min_gap[t]);
                violations += bad[t];
            }
            table.add({"lemma2", name, nullptr, n,
                       static_cast<std::uint64_t>(cfg.trials) * trees.size(), violations,
                       cfg.trials > 0 ? num(worst) : json(nullptr), status(violations),
                       "minimum gap over trees x configurations"});
        }
    }

    CommandResult res;
    res.exit_code = any_violation ? kCounterexample : (any_capacity ? kCapacityError : kSuccess);
    res.report = render(cfg, "verify", table, {{"seed", cfg.seed}, {"trials", cfg.trials}});
    if (any_capacity) {
        res.diagnostics = "some checks exceed the enumeration caps; see rows with status 'capacity'";
    }
    if (any_violation) {
        res.diagnostics = "verification found a counterexample";
    }
    return res;
}

CommandResult cmd_mayer(const RunConfig& cfg) {
    validate_common(cfg);
    const int n = cfg.n.empty() ? 2 : cfg.n.front();
    if (n < 2 || n > kMaxExhaustiveVertices) {
        throw CapacityError("mayer: n = " + std::to_string(n) + " outside supported range [2, 6]");
    }
    if (cfg.samples < 2) {
        throw InvalidInput("samples must be >= 2");
    }
    if (!(cfg.box_side > 0.0)) {
        throw InvalidInput("box_side must be > 0");
    }
    const PairPotential p = required_potential(cfg);
    if (cfg.betas.empty()) {
        throw InvalidInput("mayer needs at least one beta");
    }

    Table table({"n", "beta", "box_side", "samples", "estimate", "std_error", "C", "Ctilde",
                 "bound_py_basuev", "bound_py", "bound_penrose_ruelle", "violations"});
    bool violated = false;
    for (double beta : cfg.betas) {
        const Box box{cfg.box_side, p.dimension()};
        const MayerEstimate est =
            mayer_coefficient_mc(p, beta, n, box, {cfg.samples, cfg.seed, cfg.workers});
        const double c = integral_C(p, beta).value;
        const double ct = integral_Ctilde(p, beta).value;
        std::optional<double> py_basuev;
        std::optional<double> py;
        std::optional<double> pr;
        if (p.known_Bbar()) {
            py_basuev = bound_py_basuev(n, beta, p.known_Bbar()->value, ct);
        }
        if (p.known_B()) {
            py = bound_py(n, beta, *p.known_B(), ct);
            pr = bound_penrose_ruelle(n, beta, *p.known_B(), c);
        }
        // |C_n| exceeding a bound by more than 3 standard errors is a violation.
        const double low = std::abs(est.value) - 3.0 * est.std_error;
        std::string violations;
        for (const auto& [name, bound] : {std::pair{"bound_py_basuev", py_basuev},
                                          std::pair{"bound_py", py},
                                          std::pair{"bound_penrose_ruelle", pr}}) {
            if (bound && low > *bound) {
                violations += (violations.empty() ? "" : ";") + std::string(name);
                violated = true;
            }
        }
        table.add({n, num(beta), num(cfg.box_side), est.samples, num(est.value), num(est.std_error),
                   num(c), num(ct), opt_num(py_basuev), opt_num(py), opt_num(pr), violations});
    }
    CommandResult res;
    res.exit_code = violated ? kCounterexample : kSuccess;
    res.report = render(cfg, "mayer", table, {{"potential", p.kind()}, {"seed", cfg.seed}});
    if (violated) {
        res.diagnostics = "Monte Carlo estimate exceeds a coefficient bound by more than 3 sigma";
    }
    return res;
}

CommandResult cmd_stability(const RunConfig& cfg) {
    validate_common(cfg);
    const PairPotential p = required_potential(cfg);
    const std::vector<int> ns = cfg.n.empty() ? std::vector<int>{2, 3, 4} : cfg.n;
    for (int n : ns) {
        if (n < 2) {
            throw InvalidInput("stability needs n >= 2");
        }
    }
    if (cfg.starts < 0 || cfg.check_trials < 0) {
        throw InvalidInput("starts and check_trials must be >= 0");
    }
    Table table({"n", "energy", "B_n", "Bbar_n", "starts", "iterations", "checks_passed", "failed_checks"});
    json details = json::array();
    bool failed = false;
    for (int n : ns) {
        const auto est = estimate_Bn(p, n, {cfg.starts, cfg.seed, cfg.workers, 20000});
        const auto report = check_stability_inequalities(est, p, {cfg.check_trials, cfg.seed, 1e-9});
        std::string failures;
        json checks = json::array();
        for (const auto& c : report.checks) {
            if (c.applicable && !c.passed) {
                failures += (failures.empty() ? "" : ";") + c.name;
            }
            checks.push_back({{"name", c.name}, {"applicable", c.applicable}, {"passed", c.passed},
                              {"detail", c.detail}});
        }
        failed = failed || !report.passed;
        table.add({n, num(est.energy), num(est.Bn), num(est.Bbar_n), est.starts, est.iterations,
                   report.passed, failures});
        details.push_back({{"n", n}, {"checks", checks}});
    }
    CommandResult res;
    res.exit_code = failed ? kCounterexample : kSuccess;
    res.report = render(cfg, "stability", table,
                        {{"potential", p.kind()}, {"seed", cfg.seed}, {"checks", details}});
    if (failed) {
        res.diagnostics = "a stability inequality failed: the optimizer beat a cited constant or the constants are wrong";
    }
    return res;
}

CommandResult cmd_gfun(const RunConfig& cfg) {
    validate_common(cfg);
    if (!(cfg.u_min > 0.0) || !(cfg.u_max >= cfg.u_min) || cfg.u_count < 1 || cfg.x_count < 1) {
        throw InvalidInput("gfun needs 0 < u_min <= u_max and positive grid counts");
    }
    Table table({"function", "argument", "value"});
    for (int k = 0; k < cfg.u_count; ++k) {
        const double t = cfg.u_count == 1 ? 0.0 : static_cast<double>(k) / (cfg.u_count - 1);
        const double u = k == 0 ? cfg.u_min
                         : k == cfg.u_count - 1 ? cfg.u_max
                                                : std::exp(std::log(cfg.u_min) + t * (std::log(cfg.u_max) - std::log(cfg.u_min)));
        table.add({"g", num(u), num(g_function(u))});
    }
    const double top = std::exp(-1.0);
    for (int k = 0; k < cfg.x_count; ++k) {
        const double x = cfg.x_count == 1 ? 0.0 : (k == cfg.x_count - 1 ? top : top * k / (cfg.x_count - 1));
        table.add({"w", num(x), num(tree_function_w(x))});
    }
    CommandResult res;
    res.report = render(cfg, "gfun", table);
    return res;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg) {
    try {
        if (command == "radii") {
            return cmd_radii(cfg);
        }
        if (command == "verify") {
            return cmd_verify(cfg);
        }
        if (command == "mayer") {
            return cmd_mayer(cfg);
        }
        if (command == "stability") {
            return cmd_stability(cfg);
        }
        if (command == "gfun") {
            return cmd_gfun(cfg);
        }
        return {kValidationError, "", "unknown command '" + command + "'"};
    } catch (const CapacityError& e) {
        return {kCapacityError, "", e.what()};
    } catch (const std::exception& e) {
        return {kValidationError, "", e.what()};
    }
}

}  // namespace vb::cli
