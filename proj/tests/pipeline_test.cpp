#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "isoblock/corpus.hpp"
#include "isoblock/model_io.hpp"
#include "isoblock/pipeline.hpp"
#include "support.hpp"

using namespace isoblock;
using namespace isoblock::test;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    explicit TempDir(const std::string &tag)
        : path_(fs::temp_directory_path() / ("isoblock_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string &name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string &path, const std::string &text)
{
    std::ofstream(path, std::ios::binary) << text;
}

std::string without_wall_time(const std::string &manifest)
{
    std::istringstream in(manifest);
    std::string line, out;
    while (std::getline(in, line))
        if (!line.starts_with("wall_time_seconds:"))
            out += line + '\n';
    return out;
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(ISOBLOCK_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig filter_config(const TempDir &dir, const std::string &input)
{
    RunConfig cfg;
    cfg.input = input;
    cfg.output = dir / "out.models";
    return cfg;
}

} // namespace

TEST_CASE("filter collapses permuted copies")
{
    TempDir dir("copies");
    TestRng rng(1);
    const Model base = random_model(rng, mixed_signature(), 4);
    std::vector<Model> copies;
    for (int k = 0; k < 24; ++k)
        copies.push_back(apply_permutation(base, random_permutation(rng, 4)));
    write_model_file(dir / "in.models", copies);

    std::ostringstream diag;
    const FilterSummary s = run_filter(filter_config(dir, dir / "in.models"), diag);
    CHECK(s.models_in == 24);
    CHECK(s.blocks == 1);
    CHECK(s.score == 24 * 23);
    const auto out = read_model_file(dir / "out.models");
    REQUIRE(out.size() == 1);
    CHECK(out[0] == copies[0]);
    CHECK(fs::exists(dir / "out.models.manifest"));
}

TEST_CASE("filter on the order-3 semigroups keeps 24")
{
    TempDir dir("sg3");
    write_model_file(dir / "in.models", enumerate_models(AxiomSet::semigroup, 3));
    std::ostringstream diag;
    RunConfig cfg = filter_config(dir, dir / "in.models");
    cfg.explain = true;
    const FilterSummary s = run_filter(cfg, diag);
    CHECK(s.representatives.size() == 24);
    CHECK(read_model_file(dir / "out.models").size() == 24);

    // 113 - 24 dropped models, one explain line each
    std::istringstream lines(diag.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.starts_with("model "));
        CHECK(line.find(" is isomorphic to model ") != std::string::npos);
        CHECK(line.find("0 -> ") != std::string::npos);
        ++count;
    }
    CHECK(count == 113 - 24);

    const std::string manifest = slurp(dir / "out.models.manifest");
    CHECK(manifest.find("models_in: 113\n") != std::string::npos);
    CHECK(manifest.find("representatives_out: 24\n") != std::string::npos);
    CHECK(manifest.find("seed: 1\n") != std::string::npos);
}

TEST_CASE("filter output does not depend on the job count")
{
    TempDir dir("jobs");
    write_model_file(dir / "in.models", enumerate_models(AxiomSet::quasigroup, 4));
    std::ostringstream diag;
    RunConfig cfg = filter_config(dir, dir / "in.models");
    cfg.output = dir / "one.models";
    run_filter(cfg, diag);
    cfg.output = dir / "eight.models";
    cfg.jobs = 8;
    run_filter(cfg, diag);
    CHECK(slurp(dir / "one.models") == slurp(dir / "eight.models"));
    CHECK(without_wall_time(slurp(dir / "one.models.manifest"))
          == without_wall_time(slurp(dir / "eight.models.manifest")));
    CHECK(read_model_file(dir / "one.models").size() == 35);
}

TEST_CASE("input errors leave no output behind")
{
    TempDir dir("bad");
    spit(dir / "in.models", "interpretation( 2, [], [ function(*(_,_), [0,1,1]) ]).\n");
    std::ostringstream diag;
    CHECK_THROWS_AS(run_filter(filter_config(dir, dir / "in.models"), diag), ParseError);
    CHECK_FALSE(fs::exists(dir / "out.models"));
    CHECK_FALSE(fs::exists(dir / "out.models.manifest"));

    RunConfig big = filter_config(dir, dir / "z4.models");
    write_model_file(dir / "z4.models", std::vector<Model>{z4()});
    big.max_order = 3;
    CHECK_THROWS_AS(run_filter(big, diag), ModelError);
    CHECK_FALSE(fs::exists(dir / "out.models"));
}

TEST_CASE("degenerate inputs")
{
    TempDir dir("small");
    std::ostringstream diag;

    spit(dir / "empty.models", "");
    const FilterSummary empty = run_filter(filter_config(dir, dir / "empty.models"), diag);
    CHECK(empty.models_in == 0);
    CHECK(slurp(dir / "out.models").empty());

    write_model_file(dir / "one.models", std::vector<Model>{binary_model(1, {0}), binary_model(1, {0})});
    CHECK(run_filter(filter_config(dir, dir / "one.models"), diag).representatives.size() == 1);

    write_model_file(dir / "single.models", std::vector<Model>{z4()});
    CHECK(run_filter(filter_config(dir, dir / "single.models"), diag).representatives.size() == 1);

    // relations only: no random formulas can be built, the run still works
    const auto sig = make_signature({{"r", SymbolKind::relation, 2}});
    const Model chain(3, sig, {{0, 1, 0, 0, 0, 1, 0, 0, 0}});
    const Model reverse(3, sig, {{0, 0, 0, 1, 0, 0, 0, 1, 0}});
    write_model_file(dir / "rel.models", std::vector<Model>{chain, reverse});
    CHECK(run_filter(filter_config(dir, dir / "rel.models"), diag).representatives.size() == 1);
}

TEST_CASE("stats report")
{
    TempDir dir("stats");
    TestRng rng(2);
    const Model base = random_model(rng, star_signature(), 3);
    std::vector<Model> copies;
    for (int k = 0; k < 5; ++k)
        copies.push_back(apply_permutation(base, random_permutation(rng, 3)));
    write_model_file(dir / "copies.models", copies);

    RunConfig cfg;
    cfg.input = dir / "copies.models";
    cfg.filter_too = true;
    std::ostringstream out;
    run_stats(cfg, out);
    CHECK(out.str().find("blocks: 1\nblock_size_histogram: 5:1\nscore: 20\n") != std::string::npos);
    CHECK(out.str().find("avg_representatives_per_block: 1.000\n") != std::string::npos);

    spit(dir / "empty.models", "");
    cfg.input = dir / "empty.models";
    std::ostringstream empty;
    run_stats(cfg, empty);
    CHECK(empty.str() == "models: 0\n"
                         "selected_invariants: 0\n"
                         "blocks: 0\n"
                         "block_size_histogram: -\n"
                         "score: 0\n"
                         "representatives: 0\n"
                         "avg_representatives_per_block: 0.000\n");

    write_model_file(dir / "sg3.models", enumerate_models(AxiomSet::semigroup, 3));
    cfg.input = dir / "sg3.models";
    cfg.random_invariants = false;
    cfg.histograms = true;
    std::ostringstream sg;
    run_stats(cfg, sg);
    CHECK(sg.str().find("representatives: 24\n") != std::string::npos);
    CHECK(sg.str().find("histogram *.B5: 0:") != std::string::npos);
}

TEST_CASE("block size histogram")
{
    std::vector<Block> blocks(4);
    blocks[0].members = {0, 1, 2};
    blocks[1].members = {3};
    blocks[2].members = {4, 5, 6};
    blocks[3].members = {7};
    CHECK(block_size_histogram(blocks) == "1:2 3:2");
    CHECK(block_size_histogram({}) == "-");
}

TEST_CASE("partition writes one file per block")
{
    TempDir dir("part");
    const auto models = enumerate_models(AxiomSet::semigroup, 2);
    write_model_file(dir / "in.models", models);
    RunConfig cfg;
    cfg.input = dir / "in.models";
    cfg.out_dir = dir / "blocks";
    const Manifest manifest = run_partition(cfg);

    std::size_t blocks = 0, total = 0;
    for (const auto &[key, value] : manifest.fields())
        if (key == "blocks")
            blocks = std::stoul(value);
    REQUIRE(blocks > 0);
    for (std::size_t b = 1; b <= blocks; ++b)
        total += read_model_file(cfg.out_dir + "/block_" + std::to_string(b) + ".models").size();
    CHECK(total == models.size());
    CHECK_FALSE(fs::exists(cfg.out_dir + "/block_" + std::to_string(blocks + 1) + ".models"));
    CHECK(fs::exists(cfg.out_dir + "/manifest.txt"));
}

TEST_CASE("select output can be replayed")
{
    TempDir dir("replay");
    TestRng rng(3);
    const auto sig = make_signature({{"*", SymbolKind::function, 2}, {"'", SymbolKind::function, 1}});
    std::vector<Model> models;
    for (int i = 0; i < 300; ++i)
        models.push_back(random_model(rng, sig, 3));
    write_model_file(dir / "in.models", models);

    RunConfig cfg;
    cfg.input = dir / "in.models";
    std::ostringstream listing;
    const Manifest m = run_select(cfg, listing);
    spit(dir / "select.txt", listing.str());

    std::size_t selected = 0;
    for (const auto &[key, value] : m.fields())
        if (key == "selected")
            selected = std::stoul(value);
    const auto formulas = read_replay_formulas(dir / "select.txt", *sig);
    CHECK(formulas.size() == selected);

    RunConfig again = cfg;
    again.replay = dir / "select.txt";
    const Analysis fresh = analyze(models, cfg);
    const Analysis replayed = analyze(models, again);
    CHECK(replayed.replayed);
    CHECK(replayed.selection.selected == fresh.selection.selected);
    REQUIRE(replayed.blocks.size() == fresh.blocks.size());
    for (std::size_t b = 0; b < fresh.blocks.size(); ++b)
        CHECK(replayed.blocks[b].members == fresh.blocks[b].members);
}

TEST_CASE("config validation")
{
    RunConfig cfg;
    cfg.jobs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.selection.max_vars = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_order = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(RunConfig{}.validate());

    RunConfig gen;
    gen.axioms = "semigroup";
    gen.order = 4;
    gen.output = "-";
    CHECK_THROWS_AS(run_gen(gen), ConfigError);
    gen.axioms = "loop";
    gen.order = 2;
    CHECK_THROWS_AS(run_gen(gen), ConfigError);
}

TEST_CASE("command line exit codes")
{
    TempDir dir("cli");
    CHECK(run_cli("gen --axioms semigroup --order 3 -o " + (dir / "sg3.models")) == 0);
    CHECK(read_model_file(dir / "sg3.models").size() == 113);
    CHECK(run_cli("filter " + (dir / "sg3.models") + " -o " + (dir / "out.models") + " --jobs 2") == 0);
    CHECK(read_model_file(dir / "out.models").size() == 24);

    spit(dir / "bad.models", "interpretation( 2, [], [ function(*(_,_), [0,1,1,7]) ]).\n");
    CHECK(run_cli("filter " + (dir / "bad.models") + " -o " + (dir / "x.models")) == 1);
    CHECK(run_cli("filter " + (dir / "missing.models") + " -o " + (dir / "x.models")) == 1);
    CHECK(run_cli("filter " + (dir / "sg3.models") + " -o " + (dir / "x.models") + " --jobs 0") == 2);
    CHECK(run_cli("filter " + (dir / "sg3.models") + " -o " + (dir / "x.models") + " --max-depth 0") == 2);
    CHECK(run_cli("filter " + (dir / "sg3.models")) == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("gen --axioms semigroup --order 9 -o " + (dir / "y.models")) == 2);
    CHECK(run_cli("stats " + (dir / "sg3.models") + " --filter-too") == 0);
    CHECK(run_cli("select " + (dir / "sg3.models")) == 0);
    CHECK(run_cli("partition " + (dir / "sg3.models") + " --out-dir " + (dir / "blocks")) == 0);
    CHECK(fs::exists(dir / "blocks/manifest.txt"));

    // the job count can come from the environment
    auto with_env_jobs = [&](const std::string &jobs) {
        const std::string cmd = "ISOBLOCK_JOBS=" + jobs + " " + std::string(ISOBLOCK_CLI) + " filter "
                                + (dir / "sg3.models") + " -o " + (dir / "env.models") + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(with_env_jobs("4") == 0);
    CHECK(slurp(dir / "env.models") == slurp(dir / "out.models"));
    CHECK(with_env_jobs("0") == 2);

    // stdin input and stdout output
    const std::string pipe_cmd = "cat " + (dir / "sg3.models") + " | " + std::string(ISOBLOCK_CLI)
                                 + " filter - -o - > " + (dir / "piped.models") + " 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(pipe_cmd.c_str())) == 0);
    CHECK(slurp(dir / "piped.models") == slurp(dir / "out.models"));
}
