// fockcli: command-line front end for the scenario runner.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fock/cli.hpp"

namespace {

std::vector<double> parse_radii(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw fock::cli::ConfigError("radii", "not a number: \"" + item + "\"");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace fock::cli;
    CLI::App app{"Fock-Sobolev spaces: norms, lattices, Carleson measures, weighted composition operators"};
    app.require_subcommand(1, 1);

    std::string params_path, measure_path, symbol_path, function_path, out_path, format = "json-lines", radii;
    std::optional<int> cells;
    std::optional<double> tail_tol;
    std::optional<std::uint64_t> seed;
    int threads = 1;

    for (const auto& name : commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--params", params_path, "Params record (JSON)")->required();
        if (name == "carleson") sub->add_option("--measure", measure_path, "measure record (JSON)")->required();
        if (name == "compop") sub->add_option("--symbol", symbol_path, "symbol record (JSON)")->required();
        if (name == "verify-norms") sub->add_option("--function", function_path, "function record (JSON)")->required();
        sub->add_option("--out", out_path, "report path (stdout when absent)");
        sub->add_option("--format", format, "json-lines or csv")->check(CLI::IsMember({"json-lines", "csv"}));
        sub->add_option("--cells", cells, "quadrature cells per axis");
        sub->add_option("--tail-tol", tail_tol, "Gaussian tail tolerance");
        sub->add_option("--radii", radii, "comma-separated radii for compactness / vanishing sweeps");
        sub->add_option("--seed", seed, "seed for probes and random test families");
        sub->add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    ScenarioConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format == "csv" ? fock::ReportFormat::csv : fock::ReportFormat::json_lines;
    cfg.out_path = out_path;
    cfg.cells = cells;
    cfg.tail_tol = tail_tol;
    if (seed) cfg.seed = *seed;
    fock::set_thread_count(threads);

    RunOutcome res;
    try {
        parse_params(read_json_file(params_path), cfg);
        if (!measure_path.empty()) cfg.measure = read_json_file(measure_path);
        if (!symbol_path.empty()) cfg.symbol = read_json_file(symbol_path);
        if (!function_path.empty()) cfg.function = read_json_file(function_path);
        if (!radii.empty()) cfg.radii = parse_radii(radii);
        res = run_scenario(cfg);
    } catch (const ConfigError& e) {
        res = {kConfigError, "", error_record("config", e.field(), e.what())};
    } catch (const IoError& e) {
        res = {kIoError, "", error_record("io", e.path(), e.what())};
    }

    if (res.error) {
        std::cerr << res.error->dump() << '\n';
        return res.exit_code;
    }
    if (out_path.empty()) std::cout << res.report;
    return kOk;
}
