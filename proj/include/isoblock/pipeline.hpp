#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/block.hpp"
#include "isoblock/model.hpp"
#include "isoblock/random_invariants.hpp"

namespace isoblock {

/// Bad flags or flag combinations (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input = "-";
    std::string output;
    std::string out_dir;
    std::string manifest;
    /// Manifest of an earlier run whose formulas replace the selection step.
    std::string replay;
    unsigned jobs = 1;
    SelectionConfig selection;
    bool random_invariants = true;
    bool explain = false;
    bool filter_too = false;
    bool histograms = false;
    int max_order = 12;

    // gen
    std::string axioms;
    int order = 0;

    void validate() const;
};

/// Key: value lines in insertion order.
class Manifest {
public:
    void add(std::string key, std::string value);
    std::string str() const;
    const std::vector<std::pair<std::string, std::string>> &fields() const { return fields_; }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

/// Result of selecting random invariants and partitioning one model list.
struct Analysis {
    std::vector<Model> models;
    std::size_t sample_size = 0;
    std::size_t pool_generated = 0;
    bool replayed = false;
    Selection selection;
    std::vector<Block> blocks;
};

/// Runs the selection step (unless disabled or replayed) and partitions the
/// whole list with the basic plus selected invariants.
Analysis analyze(std::vector<Model> models, const RunConfig &cfg);

/// Reads the input named by cfg.input ("-" is stdin) and enforces max_order.
std::vector<Model> load_input(const RunConfig &cfg);

/// Formulas recorded in a manifest by an earlier run.
std::vector<RandomInvariant> read_replay_formulas(const std::string &path, const Signature &sig);

/// "size:count" pairs in increasing size, or "-" when there are no blocks.
std::string block_size_histogram(const std::vector<Block> &blocks);

struct FilterSummary {
    std::size_t models_in = 0;
    std::size_t blocks = 0;
    std::uint64_t score = 0;
    std::vector<Model> representatives;
    Manifest manifest;
};

/// parse, select, partition, filter blocks in parallel, collect
/// representatives in block order. Writes cfg.output (models) and the
/// manifest (cfg.manifest, or cfg.output + ".manifest"). `diag` receives the
/// explain listing.
FilterSummary run_filter(const RunConfig &cfg, std::ostream &diag);

/// Writes <out_dir>/block_<i>.models for each block (1-based) and
/// <out_dir>/manifest.txt. Returns the manifest.
Manifest run_partition(const RunConfig &cfg);

/// Prints the selected formulas as a manifest.
Manifest run_select(const RunConfig &cfg, std::ostream &out);

/// Prints model count, block count, block-size histogram, score and,
/// with filter_too, representatives per block.
void run_stats(const RunConfig &cfg, std::ostream &out);

/// Enumerates cfg.axioms at cfg.order into cfg.output.
std::size_t run_gen(const RunConfig &cfg);

} // namespace isoblock
