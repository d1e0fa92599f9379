#include "isoblock/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "isoblock/corpus.hpp"
#include "isoblock/invariants.hpp"
#include "isoblock/iso_filter.hpp"
#include "isoblock/model_io.hpp"
#include "isoblock/partition.hpp"

namespace isoblock {

void RunConfig::validate() const
{
    if (jobs < 1)
        throw ConfigError("--jobs must be at least 1");
    if (max_order < 1)
        throw ConfigError("--max-order must be at least 1");
    try {
        selection.validate();
    } catch (const FormulaError &e) {
        throw ConfigError(e.what());
    }
}

void Manifest::add(std::string key, std::string value)
{
    fields_.emplace_back(std::move(key), std::move(value));
}

std::string Manifest::str() const
{
    std::string out;
    for (const auto &[key, value] : fields_)
        out += key + ": " + value + "\n";
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fixed3(double v)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

std::string plain(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}

void write_text(const std::string &path, const std::string &text)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << text;
        out.close();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed to write '" + path + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

void describe_run(Manifest &m, const std::string &command, const RunConfig &cfg, const Analysis &a)
{
    const SelectionConfig &s = cfg.selection;
    m.add("command", command);
    m.add("input", cfg.input);
    m.add("seed", std::to_string(s.seed));
    m.add("random_invariants", !cfg.random_invariants ? "off" : a.replayed ? "replayed" : "on");
    m.add("pool_size", std::to_string(s.pool_size));
    m.add("max_selected", std::to_string(s.max_selected));
    m.add("max_depth", std::to_string(s.max_depth));
    m.add("max_vars", std::to_string(s.max_vars));
    m.add("sample_fraction", plain(s.sample_fraction));
    m.add("sample_min", std::to_string(s.sample_min));
    m.add("sample_size", std::to_string(a.sample_size));
    m.add("pool_generated", std::to_string(a.pool_generated));
    m.add("baseline_score", std::to_string(a.selection.baseline_score));
    m.add("selected", std::to_string(a.selection.selected.size()));
    for (std::size_t i = 0; i < a.selection.selected.size(); ++i) {
        const RandomInvariant &inv = a.selection.selected[i];
        m.add("formula." + std::to_string(i + 1),
              to_string(inv) + " base=x" + std::to_string(inv.base_variable));
    }
    m.add("models_in", std::to_string(a.models.size()));
    m.add("blocks", std::to_string(a.blocks.size()));
    m.add("block_size_histogram", block_size_histogram(a.blocks));
    m.add("score", std::to_string(score(a.blocks)));
}

} // namespace

std::vector<Model> load_input(const RunConfig &cfg)
{
    std::vector<Model> models;
    if (cfg.input == "-") {
        models = parse_models(std::cin);
    } else {
        models = read_model_file(cfg.input);
    }
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].order() > cfg.max_order)
            throw ModelError("model " + std::to_string(i + 1) + " has order " + std::to_string(models[i].order())
                             + ", above --max-order " + std::to_string(cfg.max_order));
    return models;
}

std::vector<RandomInvariant> read_replay_formulas(const std::string &path, const Signature &sig)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open replay manifest '" + path + "'");
    std::vector<RandomInvariant> formulas;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("formula.", 0) != 0)
            continue;
        const auto colon = line.find(": ");
        const auto base = line.rfind(" base=x");
        if (colon == std::string::npos || base == std::string::npos || base < colon)
            throw ConfigError("malformed formula line in '" + path + "': " + line);
        const std::string text = line.substr(colon + 2, base - colon - 2);
        const int base_variable = std::stoi(line.substr(base + 7));
        try {
            formulas.push_back(parse_formula(text, sig, base_variable));
        } catch (const FormulaError &e) {
            throw ConfigError(e.what());
        }
    }
    return formulas;
}

std::string block_size_histogram(const std::vector<Block> &blocks)
{
    if (blocks.empty())
        return "-";
    std::map<std::size_t, std::size_t> counts;
    for (const Block &b : blocks)
        ++counts[b.size()];
    std::string out;
    for (const auto &[size, count] : counts) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(size) + ":" + std::to_string(count);
    }
    return out;
}

Analysis analyze(std::vector<Model> models, const RunConfig &cfg)
{
    cfg.validate();
    Analysis a;
    a.models = std::move(models);
    if (a.models.empty())
        return a;

    const Signature &sig = a.models.front().signature();
    if (!cfg.replay.empty()) {
        a.replayed = true;
        a.selection.selected = read_replay_formulas(cfg.replay, sig);
    } else if (cfg.random_invariants) {
        const auto pool = generate_pool(sig, cfg.selection);
        a.pool_generated = pool.size();
        a.sample_size = sample_size(a.models.size(), cfg.selection);
        const std::span<const Model> sample(a.models.data(), a.sample_size);
        a.selection = select_invariants(pool, sample, cfg.selection);
    }
    a.blocks = partition(a.models, a.selection.selected, cfg.jobs);
    return a;
}

FilterSummary run_filter(const RunConfig &cfg, std::ostream &diag)
{
    cfg.validate();
    if (cfg.output.empty())
        throw ConfigError("filter needs an output file (-o)");
    const auto start = Clock::now();

    Analysis a = analyze(load_input(cfg), cfg);
    const auto results = filter_blocks(a.models, a.blocks, cfg.jobs, cfg.explain);

    FilterSummary summary;
    summary.models_in = a.models.size();
    summary.blocks = a.blocks.size();
    summary.score = score(a.blocks);
    for (const FilterResult &r : results)
        for (std::size_t index : r.representatives)
            summary.representatives.push_back(a.models[index]);

    if (cfg.explain) {
        for (const FilterResult &r : results)
            for (const Duplicate &d : r.duplicates) {
                diag << "model " << d.model + 1 << " is isomorphic to model " << d.representative + 1 << ":";
                for (std::size_t i = 0; i < d.witness.size(); ++i)
                    diag << (i ? ", " : " ") << i << " -> " << d.witness[i];
                diag << '\n';
            }
    }

    describe_run(summary.manifest, "filter", cfg, a);
    summary.manifest.add("representatives_out", std::to_string(summary.representatives.size()));
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    summary.manifest.add("wall_time_seconds", fixed3(seconds));

    if (cfg.output == "-") {
        write_models(summary.representatives, std::cout);
    } else {
        write_model_file(cfg.output, summary.representatives);
    }
    const std::string manifest_path =
        !cfg.manifest.empty() ? cfg.manifest : cfg.output != "-" ? cfg.output + ".manifest" : std::string();
    if (!manifest_path.empty())
        write_text(manifest_path, summary.manifest.str());
    return summary;
}

Manifest run_partition(const RunConfig &cfg)
{
    cfg.validate();
    if (cfg.out_dir.empty())
        throw ConfigError("partition needs an output directory (--out-dir)");
    const auto start = Clock::now();

    Analysis a = analyze(load_input(cfg), cfg);
    std::filesystem::create_directories(cfg.out_dir);
    std::string sizes;
    for (std::size_t b = 0; b < a.blocks.size(); ++b) {
        std::vector<Model> members;
        members.reserve(a.blocks[b].size());
        for (std::size_t index : a.blocks[b].members)
            members.push_back(a.models[index]);
        const auto path = std::filesystem::path(cfg.out_dir) / ("block_" + std::to_string(b + 1) + ".models");
        write_model_file(path.string(), members);
        if (!sizes.empty())
            sizes += ' ';
        sizes += std::to_string(a.blocks[b].size());
    }

    Manifest m;
    describe_run(m, "partition", cfg, a);
    m.add("block_sizes", sizes.empty() ? "-" : sizes);
    m.add("wall_time_seconds", fixed3(std::chrono::duration<double>(Clock::now() - start).count()));
    write_text((std::filesystem::path(cfg.out_dir) / "manifest.txt").string(), m.str());
    return m;
}

Manifest run_select(const RunConfig &cfg, std::ostream &out)
{
    cfg.validate();
    Analysis a = analyze(load_input(cfg), cfg);

    Manifest m;
    describe_run(m, "select", cfg, a);
    for (std::size_t i = 0; i < a.selection.scores.size(); ++i)
        m.add("score_after." + std::to_string(i + 1), std::to_string(a.selection.scores[i]));
    out << m.str();
    return m;
}

void run_stats(const RunConfig &cfg, std::ostream &out)
{
    cfg.validate();
    Analysis a = analyze(load_input(cfg), cfg);

    out << "models: " << a.models.size() << '\n';
    out << "selected_invariants: " << a.selection.selected.size() << '\n';
    out << "blocks: " << a.blocks.size() << '\n';
    out << "block_size_histogram: " << block_size_histogram(a.blocks) << '\n';
    out << "score: " << score(a.blocks) << '\n';

    if (cfg.filter_too) {
        const auto results = filter_blocks(a.models, a.blocks, cfg.jobs);
        std::size_t reps = 0;
        for (const FilterResult &r : results)
            reps += r.representatives.size();
        const double avg = a.blocks.empty() ? 0.0 : static_cast<double>(reps) / static_cast<double>(a.blocks.size());
        out << "representatives: " << reps << '\n';
        out << "avg_representatives_per_block: " << fixed3(avg) << '\n';
    }

    if (cfg.histograms && !a.models.empty()) {
        const auto names = slot_names(a.models.front().signature(), a.selection.selected.size());
        std::vector<std::map<InvariantValue, std::size_t>> hist(names.size());
        for (const Model &m : a.models)
            for (const InvariantVector &row : element_vectors(m, a.selection.selected))
                for (std::size_t s = 0; s < row.size(); ++s)
                    ++hist[s][row[s]];
        for (std::size_t s = 0; s < names.size(); ++s) {
            out << "histogram " << names[s] << ":";
            for (const auto &[value, count] : hist[s])
                out << ' ' << value << ':' << count;
            out << '\n';
        }
    }
}

std::size_t run_gen(const RunConfig &cfg)
{
    const auto axioms = parse_axiom_set(cfg.axioms);
    if (!axioms)
        throw ConfigError("unknown axiom set '" + cfg.axioms + "'");
    if (cfg.order < 1)
        throw ConfigError("--order must be at least 1");
    if (cfg.output.empty())
        throw ConfigError("gen needs an output file (-o)");
    const int bound = default_max_order(*axioms);
    if (cfg.order > bound)
        throw ConfigError(std::string(to_string(*axioms)) + " enumeration is limited to order "
                          + std::to_string(bound));

    const auto models = enumerate_models(*axioms, cfg.order);
    if (cfg.output == "-")
        write_models(models, std::cout);
    else
        write_model_file(cfg.output, models);
    return models.size();
}

} // namespace isoblock
