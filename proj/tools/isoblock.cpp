// isoblock: remove isomorphic copies from lists of finite models.
//
//   isoblock gen --axioms semigroup --order 3 -o sg3.models
//   isoblock filter sg3.models -o sg3.filtered --jobs 4
//   isoblock partition sg3.models --out-dir blocks/
//   isoblock select sg3.models
//   isoblock stats sg3.models --filter-too

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "isoblock/model_io.hpp"
#include "isoblock/pipeline.hpp"

namespace {

enum ExitCode { exit_ok = 0, exit_input = 1, exit_config = 2 };

CLI::Option *add_input_flags(CLI::App &cmd, isoblock::RunConfig &cfg)
{
    cmd.add_option("input", cfg.input, "Mace4 interpretation file, '-' for stdin")->default_val("-");
    auto *jobs = cmd.add_option("--jobs", cfg.jobs, "Worker threads (default: $ISOBLOCK_JOBS or 1)")
                     ->check(CLI::PositiveNumber)
                     ->default_val(1);
    cmd.add_option("--max-order", cfg.max_order, "Refuse models above this order")->default_val(12);
    return jobs;
}

// CLI11 quietly skips environment values that fail validation, so the
// variable is read here instead.
void apply_jobs_env(isoblock::RunConfig &cfg)
{
    const char *env = std::getenv("ISOBLOCK_JOBS");
    if (env == nullptr || *env == '\0')
        return;
    unsigned value = 0;
    const char *end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value == 0)
        throw isoblock::ConfigError(std::string("ISOBLOCK_JOBS must be a positive integer, got '") + env + "'");
    cfg.jobs = value;
}

void add_selection_flags(CLI::App &cmd, isoblock::RunConfig &cfg)
{
    auto &s = cfg.selection;
    cmd.add_option("--seed", s.seed, "Seed for random formula generation")->default_val(1);
    cmd.add_flag("!--no-random-invariants", cfg.random_invariants, "Use the basic invariants only");
    cmd.add_option("--pool-size", s.pool_size, "Random formulas generated")->default_val(50);
    cmd.add_option("--max-selected", s.max_selected, "Random formulas kept at most")->default_val(20);
    cmd.add_option("--max-depth", s.max_depth, "Depth bound of formula terms")->default_val(4);
    cmd.add_option("--max-vars", s.max_vars, "Variables per formula at most")->default_val(3);
    cmd.add_option("--sample-min", s.sample_min, "Smallest selection sample")->default_val(1000);
    cmd.add_option("--sample-fraction", s.sample_fraction, "Selection sample as a fraction of the input")
        ->default_val(0.002);
    cmd.add_option("--replay", cfg.replay, "Reuse the formulas recorded in a manifest");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Split finite models into non-isomorphic blocks and keep one model per isomorphism class"};
    app.require_subcommand(1);

    isoblock::RunConfig cfg;

    auto *filter = app.add_subcommand("filter", "Keep one representative per isomorphism class");
    std::vector<CLI::Option *> jobs_flags;
    jobs_flags.push_back(add_input_flags(*filter, cfg));
    add_selection_flags(*filter, cfg);
    filter->add_option("-o,--out", cfg.output, "Output file, '-' for stdout")->required();
    filter->add_option("--manifest", cfg.manifest, "Manifest path (default: <out>.manifest)");
    filter->add_flag("--explain", cfg.explain, "Print the isomorphism found for every dropped model");

    auto *part = app.add_subcommand("partition", "Write each block of models to its own file");
    jobs_flags.push_back(add_input_flags(*part, cfg));
    add_selection_flags(*part, cfg);
    part->add_option("--out-dir", cfg.out_dir, "Directory for block files and manifest.txt")->required();

    auto *select = app.add_subcommand("select", "Select random invariants and print them");
    jobs_flags.push_back(add_input_flags(*select, cfg));
    add_selection_flags(*select, cfg);
    select->add_option("-o,--out", cfg.output, "Write the listing here instead of stdout");

    auto *stats = app.add_subcommand("stats", "Report block statistics");
    jobs_flags.push_back(add_input_flags(*stats, cfg));
    add_selection_flags(*stats, cfg);
    stats->add_flag("--filter-too", cfg.filter_too, "Also filter blocks and report representatives per block");
    stats->add_flag("--histograms", cfg.histograms, "Print a value histogram for every invariant slot");

    auto *gen = app.add_subcommand("gen", "Enumerate all models of a small order");
    gen->add_option("--axioms", cfg.axioms,
                    "magma, semigroup, commutative-magma, quasigroup, band or commutative-semigroup")
        ->required();
    gen->add_option("--order", cfg.order, "Domain size")->required();
    gen->add_option("-o,--out", cfg.output, "Output file, '-' for stdout")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_config;
    }

    try {
        const bool jobs_given =
            std::any_of(jobs_flags.begin(), jobs_flags.end(), [](const CLI::Option *o) { return o->count() > 0; });
        if (!jobs_given && !*gen)
            apply_jobs_env(cfg);
        if (*filter) {
            isoblock::run_filter(cfg, std::cout);
        } else if (*part) {
            isoblock::run_partition(cfg);
        } else if (*select) {
            if (cfg.output.empty()) {
                isoblock::run_select(cfg, std::cout);
            } else {
                std::ofstream out(cfg.output);
                if (!out)
                    throw std::runtime_error("cannot open '" + cfg.output + "' for writing");
                isoblock::run_select(cfg, out);
            }
        } else if (*stats) {
            isoblock::run_stats(cfg, std::cout);
        } else if (*gen) {
            isoblock::run_gen(cfg);
        }
    } catch (const isoblock::ConfigError &e) {
        std::cerr << "isoblock: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception &e) {
        std::cerr << "isoblock: " << e.what() << '\n';
        return exit_input;
    }
    return exit_ok;
}
