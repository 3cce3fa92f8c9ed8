// Command line front end: run, spectrum, table, islands.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nosas/errors.hpp"
#include "nosas/experiment.hpp"
#include "nosas/report.hpp"
#include "nosas/tables.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

// Flags that map one-to-one onto config keys. Only flags given on the command
// line are applied, on top of the config file.
struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool verify = false;

    void add(CLI::App& app, bool with_solver)
    {
        app.add_option("--config", config_file, "Config file (key=value lines or a JSON object)");
        add_value(app, "subdomains", "--subdomains", "Subdomains per side (1/H)");
        add_value(app, "cells", "--cells", "Grid cells per subdomain side (H/h)");
        add_value(app, "pattern", "--pattern",
                  "constant|channel|comb|string|inclusion_grid|dual_stripe|added_channels|raster_file");
        add_value(app, "channels", "--channels", "added_channels: number of extra channels (0-4)");
        add_value(app, "raster", "--raster", "raster_file: comma-separated coefficient grid, top row first");
        add_value(app, "high", "--high", "High coefficient value");
        add_value(app, "low", "--low", "Low coefficient value");
        add_value(app, "extra", "--extra", "Channel coefficient value for added_channels");
        if (with_solver) {
            add_value(app, "kind", "--kind", "harmonic|aas|mes|nosas_exact|nosas_block|nosas_diagonal");
            add_value(app, "c", "--c", "Threshold constant: eta = c h / H");
            add_value(app, "rtol", "--rtol", "PCG relative residual tolerance");
            add_value(app, "max_iter", "--max-iter", "PCG iteration limit");
            add_value(app, "spectra", "--spectra", "Keep per-subdomain spectra in the report (true/false)");
            options["verify"] = app.add_flag("--verify", verify, "Dense check of the preconditioned spectrum");
        }
    }

    void add_value(CLI::App& app, const std::string& key, const std::string& flag, const std::string& help)
    {
        options[key] = app.add_option(flag, values[key], help);
    }

    nosas::ExperimentConfig resolve() const
    {
        std::map<std::string, std::string> settings;
        if (!config_file.empty()) settings = nosas::read_config_file(config_file);
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) settings[key] = key == "verify" ? "true" : values.at(key);
        nosas::ExperimentConfig cfg;
        nosas::apply_settings(cfg, settings);
        cfg.validate();
        return cfg;
    }
};

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") std::cout << text;
    else nosas::write_file_atomic(path, text);
}

int cmd_run(const ConfigFlags& flags, const std::string& out)
{
    nosas::ExperimentConfig cfg = flags.resolve();
    if (!out.empty()) cfg.out = out;
    const nosas::ExperimentReport r = nosas::run_experiment(cfg);
    std::printf("dofs %d  interface %d  kind %s  coarse_dim %d\n", r.dofs, r.interface_dofs,
                nosas::to_string(cfg.coarse.kind).c_str(), r.coarse_dim);
    std::printf("iterations %d  converged %s  residual %.3e  cond %.4f\n", r.iterations, r.converged ? "yes" : "no",
                r.final_residual, r.cond_estimate);
    if (r.verify_cond) std::printf("verify cond %.6f  lambda [%.6f, %.6f]\n", *r.verify_cond, *r.verify_lambda_min,
                                   *r.verify_lambda_max);
    if (r.theoretical_upper > 0.0) std::printf("bound %.4f\n", r.theoretical_upper);
    if (!cfg.out.empty()) nosas::write_file_atomic(cfg.out, nosas::report_to_json(r) + "\n");
    if (!r.converged) {
        std::fprintf(stderr, "error: PCG did not converge in %d iterations\n", cfg.max_iter);
        return exit_numerical;
    }
    return exit_ok;
}

int cmd_islands(const ConfigFlags& flags, const std::string& out)
{
    const nosas::ExperimentConfig cfg = flags.resolve();
    const auto reports = nosas::island_survey(cfg);
    std::string csv = "subdomain,floating,islands,qualifying,predicted,observed,match\n";
    int mismatches = 0;
    for (const auto& r : reports) {
        const bool known = r.observed_small >= 0;
        const bool match = !known || r.observed_small == r.predicted_small;
        if (!match) ++mismatches;
        csv += std::to_string(r.subdomain) + ',' + (r.floating ? "1" : "0") + ',' + std::to_string(r.components.size()) +
               ',' + std::to_string(r.qualifying) + ',' + std::to_string(r.predicted_small) + ',' +
               (known ? std::to_string(r.observed_small) : std::string("")) + ',' + (match ? "1" : "0") + '\n';
    }
    emit(out, csv);
    std::fprintf(stderr, "%zu subdomains, %d count mismatches\n", reports.size(), mismatches);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-overlapping additive Schwarz preconditioners for heterogeneous P1 problems"};
    app.require_subcommand(1);

    ConfigFlags run_flags, spec_flags, isl_flags;
    std::string run_out, spec_out, isl_out, table_out;

    auto* run = app.add_subcommand("run", "Assemble, precondition and solve; optionally write a JSON report");
    run_flags.add(*run, true);
    run->add_option("--out", run_out, "JSON report path");

    std::string selector = "classes";
    auto* spectrum = app.add_subcommand("spectrum", "Generalized eigenvalues per subdomain as CSV");
    spec_flags.add(*spectrum, false);
    spectrum->add_option("--select", selector, "'classes' (one corner, edge and floating subdomain) or an index");
    spectrum->add_option("--out", spec_out, "CSV path (default stdout)");

    std::string table_id;
    nosas::TableOptions topt;
    topt.reference_dir = NOSAS_REFERENCE_DIR;
    auto* table = app.add_subcommand("table", "Reproduce a reference table and compare cell by cell");
    table->add_option("id", table_id, "T1..T7 or all")->required();
    table->add_option("--reference-dir", topt.reference_dir, "Directory with the reference CSV files");
    table->add_option("--max-subdomains", topt.max_subdomains, "Largest subdomains per side in grid tables");
    table->add_option("--raster", topt.raster, "T7: coefficient raster");
    table->add_option("--subdomains", topt.subdomains, "T7: subdomains per side");
    table->add_option("--cells", topt.cells, "T7: cells per subdomain side");
    table->add_option("--dataset", topt.dataset, "T7: dataset name for reference lookup");
    table->add_option("--out", table_out, "CSV path for the compared rows");

    auto* islands = app.add_subcommand("islands", "High-coefficient islands versus small eigenvalues per subdomain");
    isl_flags.add(*islands, false);
    islands->add_option("--out", isl_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*run) return cmd_run(run_flags, run_out);
        if (*spectrum) {
            emit(spec_out, nosas::dump_spectrum(spec_flags.resolve(), selector));
            return exit_ok;
        }
        if (*islands) return cmd_islands(isl_flags, isl_out);
        if (*table) {
            std::string csv;
            const auto ids = table_id == "all" ? nosas::table_ids() : std::vector<std::string>{table_id};
            for (const auto& id : ids) {
                if (id == "T7" && topt.raster.empty() && table_id == "all") continue;
                const nosas::TableResult r = nosas::reproduce_table(id, topt);
                std::cout << r.format() << '\n';
                const std::string rows = r.to_csv();
                csv += csv.empty() ? rows : rows.substr(rows.find('\n') + 1);
            }
            if (!table_out.empty()) nosas::write_file_atomic(table_out, csv);
            return exit_ok;
        }
    } catch (const nosas::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return nosas::is_numerical(e) ? exit_numerical : exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    }
    return exit_ok;
}
