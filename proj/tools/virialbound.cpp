#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "virialbound/cli.hpp"
#include "virialbound/errors.hpp"

namespace {

struct Flags {
    std::string config;
    std::string beta;
    std::string n;
    std::optional<double> box_side;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> starts;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> workers;
    std::optional<int> n_max;
    std::optional<int> trials;
    std::optional<int> orders;
    std::optional<int> check_trials;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

double parse_double(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw vb::InvalidInput(std::string("cannot parse ") + what + " value '" + s + "'");
    }
    return v;
}

vb::cli::RunConfig resolve(const Flags& f) {
    vb::cli::RunConfig cfg = f.config.empty() ? vb::cli::RunConfig{} : vb::cli::load_config(f.config);
    if (!f.beta.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& b : split_commas(f.beta)) {
            list.push_back(parse_double(b, "--beta"));
        }
        cfg.betas = vb::cli::parse_betas(list);
    }
    if (!f.n.empty()) {
        cfg.n.clear();
        for (const auto& v : split_commas(f.n)) {
            const double x = parse_double(v, "--n");
            if (x != static_cast<int>(x)) {
                throw vb::InvalidInput("--n values must be integers");
            }
            cfg.n.push_back(static_cast<int>(x));
        }
    }
    if (f.box_side) cfg.box_side = *f.box_side;
    if (f.samples) cfg.samples = *f.samples;
    if (f.seed) cfg.seed = *f.seed;
    if (f.starts) cfg.starts = *f.starts;
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = *f.format;
    if (f.workers) cfg.workers = *f.workers;
    if (f.n_max) cfg.n_max = *f.n_max;
    if (f.trials) cfg.trials = *f.trials;
    if (f.orders) cfg.orders = *f.orders;
    if (f.check_trials) cfg.check_trials = *f.check_trials;
    return cfg;
}

// Writes next to the target and renames, so a failed run never leaves a
// partial report behind.
bool write_report(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out || !(out << text) || !out.flush()) {
            return false;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    return !ec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigorous bounds for Mayer and virial series of classical gases"};
    app.require_subcommand(1);
    Flags flags;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"radii", "Convergence radii and their ratio over a beta grid"},
        {"verify", "Partition scheme, Penrose identity and Lemma 2 checks"},
        {"mayer", "Monte Carlo Mayer coefficient against the three bounds"},
        {"stability", "Stability constant estimates and inequality checks"},
        {"gfun", "Tabulate g(u) and the tree function w(x)"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--beta", flags.beta, "inverse temperature(s), comma separated");
        sub->add_option("--n", flags.n, "particle number(s), comma separated");
        sub->add_option("--box-side", flags.box_side, "Monte Carlo box side");
        sub->add_option("--samples", flags.samples, "Monte Carlo samples");
        sub->add_option("--seed", flags.seed, "random seed");
        sub->add_option("--starts", flags.starts, "optimizer starts");
        sub->add_option("--out", flags.out, "report path (stdout if omitted)");
        sub->add_option("--format", flags.format, "csv or json");
        sub->add_option("--workers", flags.workers, "worker threads");
        sub->add_option("--n-max", flags.n_max, "largest n for verify");
        sub->add_option("--trials", flags.trials, "random configurations per verify check");
        sub->add_option("--orders", flags.orders, "random edge orders per n for verify");
        sub->add_option("--check-trials", flags.check_trials, "random configurations per stability check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : vb::cli::kValidationError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    vb::cli::RunConfig cfg;
    try {
        cfg = resolve(flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return vb::cli::kValidationError;
    }

    const auto result = vb::cli::run_command(command, cfg);
    if (!result.diagnostics.empty()) {
        std::cerr << (result.report.empty() ? "error: " : "note: ") << result.diagnostics << '\n';
    }
    if (!result.report.empty()) {
        if (cfg.out.empty()) {
            std::cout << result.report << std::flush;
        } else if (!write_report(cfg.out, result.report)) {
            std::cerr << "error: cannot write report to '" << cfg.out << "'\n";
            return vb::cli::kValidationError;
        }
    }
    return result.exit_code;
}
