// citenet: command-line front end for the citation-network robustness
// pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "citenet/corpus.hpp"
#include "citenet/error.hpp"
#include "citenet/runner.hpp"

namespace {

using namespace citenet;

constexpr const char* kExitCodes =
    "Exit status:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  configuration error (bad flags, unparsable or incomplete config)\n"
    "  3  I/O error (missing or unwritable files)\n"
    "  4  schema error (malformed corpus, keyword or results file)\n"
    "  5  empty network (no connected documents matched)\n"
    "  6  benchmark generation failure\n"
    "  7  other pipeline error\n";

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> corpus;
    std::optional<std::string> keywords;
    std::optional<std::size_t> trials;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_corpus) {
    cmd->add_option("--config", f.config, "JSON experiment config");
    cmd->add_option("--seed", f.seed, "root seed (overrides config)");
    cmd->add_option("--workers", f.workers, "parallel jobs, 0 = all cores (overrides config)");
    cmd->add_option("--out", f.out, "output directory (overrides config)");
    cmd->add_option("--trials", f.trials, "detection trials I (overrides config)");
    if (needs_corpus) {
        cmd->add_option("--corpus", f.corpus, "line-delimited JSON corpus (overrides config)");
        cmd->add_option("--keywords", f.keywords, "keyword file (overrides config)");
    }
}

ExperimentConfig load_config(ExperimentKind kind, const CommonFlags& f) {
    nlohmann::json doc = nlohmann::json::object();
    std::filesystem::path base;
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw IoError("cannot open config file " + *f.config);
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file " + *f.config + ": " + e.what());
        }
        base = std::filesystem::path(*f.config).parent_path();
    }
    auto cfg = ExperimentConfig::from_json(doc, kind, base);
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) cfg.workers = *f.workers;
    if (f.out) cfg.out = *f.out;
    if (f.corpus) cfg.corpus = *f.corpus;
    if (f.keywords) cfg.keywords = *f.keywords;
    if (f.trials) cfg.trials = *f.trials;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Citation-network construction, community detection and keyword-robustness experiments"};
    app.footer(kExitCodes);
    app.require_subcommand(1);

    CommonFlags flags;
    auto* characterize = app.add_subcommand("characterize", "topology profiles and PCA of single-removal networks");
    add_common(characterize, flags, true);
    auto* sweep = app.add_subcommand("sweep", "single-keyword removal sweep with community comparison");
    add_common(sweep, flags, true);
    auto* greedy = app.add_subcommand("greedy", "greedy best/worst multi-keyword removal");
    add_common(greedy, flags, true);
    std::optional<std::string> greedy_mode;
    greedy->add_option("--mode", greedy_mode, "best or worst");

    auto* toy = app.add_subcommand("toy", "benchmark-graph toy experiment");
    add_common(toy, flags, false);
    std::optional<std::string> toy_strategy, toy_mode;
    std::optional<double> toy_rho;
    std::optional<std::size_t> toy_runs;
    std::optional<int> toy_row;
    toy->add_option("--strategy", toy_strategy, "dependent, independent or shuffled");
    toy->add_option("--mode", toy_mode, "best or worst");
    toy->add_option("--rho", toy_rho, "shuffled fraction for the shuffled strategy");
    toy->add_option("--runs", toy_runs, "repetitions");
    toy->add_option("--row", toy_row, "benchmark parameter row 1-3");

    auto* plot = app.add_subcommand("plot-data", "reshape a results CSV into long-format plot series");
    std::string plot_input;
    std::optional<std::string> plot_out;
    plot->add_option("results", plot_input, "sweep/greedy/toy CSV")->required();
    plot->add_option("--out", plot_out, "output directory (default: print to stdout)");

    auto* synth = app.add_subcommand("synth-corpus", "write a synthetic corpus and keyword file");
    citenet::SyntheticCorpusConfig synth_cfg;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--documents", synth_cfg.documents, "document count");
    synth->add_option("--keywords", synth_cfg.keywords, "keyword count");
    synth->add_option("--topics", synth_cfg.topics, "topic count");
    synth->add_option("--mean-references", synth_cfg.mean_references, "mean references per document");
    synth->add_option("--seed", synth_seed, "seed");
    synth->add_option("--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : citenet::exit_status::config;
    }

    try {
        if (*plot) {
            const auto body = citenet::emit_plot_data(plot_input);
            if (!plot_out) {
                std::cout << body;
                return 0;
            }
            std::filesystem::create_directories(*plot_out);
            std::ofstream f(std::filesystem::path(*plot_out) / "plot_data.csv");
            if (!f) throw citenet::IoError("cannot write plot data");
            f << body;
            return 0;
        }
        if (*synth) {
            const auto corpus = citenet::synthetic_corpus(synth_cfg, synth_seed);
            std::filesystem::create_directories(synth_out);
            std::ofstream docs(std::filesystem::path(synth_out) / "corpus.jsonl");
            std::ofstream kw(std::filesystem::path(synth_out) / "keywords.txt");
            if (!docs || !kw) throw citenet::IoError("cannot write synthetic corpus");
            citenet::write_corpus(docs, corpus.documents);
            kw << "# synthetic keyword list\n";
            for (const auto& p : corpus.keywords.phrases()) kw << p << '\n';
            std::cerr << "wrote " << corpus.documents.size() << " documents to " << synth_out << "\n";
            return 0;
        }

        citenet::ExperimentKind kind = citenet::ExperimentKind::sweep;
        if (*characterize) kind = citenet::ExperimentKind::characterize;
        if (*greedy) kind = citenet::ExperimentKind::greedy;
        if (*toy) kind = citenet::ExperimentKind::toy;
        auto cfg = load_config(kind, flags);
        if (greedy_mode) cfg.greedy_mode = citenet::parse_greedy_mode(*greedy_mode);
        if (toy_row) cfg.lfr = citenet::LfrConfig::table_row(*toy_row);
        if (toy_strategy) cfg.toy.strategy = citenet::parse_keyword_strategy(*toy_strategy);
        if (toy_mode) cfg.toy.mode = citenet::parse_greedy_mode(*toy_mode);
        if (toy_rho) cfg.toy.rho = *toy_rho;
        if (toy_runs) cfg.toy.runs = *toy_runs;
        citenet::run(cfg, std::cerr);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return citenet::exit_code_for(e);
    }
}
