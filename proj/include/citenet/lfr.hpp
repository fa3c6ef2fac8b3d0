#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/graph.hpp"
#include "citenet/infomap.hpp"
#include "citenet/perturbation.hpp"

namespace citenet {

struct LfrConfig {
    std::size_t n = 2000;
    double mu = 0.15;
    double gamma = -2.0;  // P(k) ~ k^gamma
    std::size_t min_community = 50;
    std::size_t max_community = 1000;
    std::size_t max_degree = 200;
    double mean_degree = 20.0;
    std::size_t communities = 8;
    double community_exponent = 1.0;  // P(s) ~ s^-exponent
    std::size_t max_attempts = 1000;
    // Bound on the sweeps that rewire self-loops, multi-edges and external
    // stubs landing inside a community; edges still invalid afterwards are
    // dropped.
    std::size_t max_rewiring_sweeps = 200;

    // Throws ConfigError when the parameters cannot describe a graph.
    void validate() const;

    // Rows 1..3 of the benchmark table used by the toy experiments.
    static LfrConfig table_row(int row);
};

struct LfrGraph {
    CitationGraph graph;  // edges oriented from lower to higher node index
    Partition planted;
};

// Lancichinetti-Fortunato-Radicchi benchmark without overlapping nodes.
// Whole generations are retried until the planted community count equals
// cfg.communities; throws GenerationFailure when max_attempts run out.
LfrGraph generate_lfr(const LfrConfig& cfg, std::uint64_t seed);

// Mean over nodes of (edges to other communities) / degree.
double realized_mixing(const CitationGraph& g, const Partition& planted);

// Degree lower bound that makes the continuous power law on
// [k_min, k_max] have the requested mean.
double solve_min_degree(double gamma, double max_degree, double mean_degree);

enum class KeywordStrategy { dependent, independent, shuffled };

std::string to_string(KeywordStrategy strategy);
KeywordStrategy parse_keyword_strategy(const std::string& text);

// dependent: copy of the planted labels. independent: uniform permutation of
// that copy. shuffled: floor(rho * n) positions chosen uniformly have their
// values permuted among themselves.
std::vector<KeywordIndex> assign_keywords(const Partition& planted, KeywordStrategy strategy, double rho,
                                          std::uint64_t seed);

// The toy network as a corpus: node ids are decimal indices, each node has
// its single keyword, edges become citations.
MatchedCorpus toy_corpus(const CitationGraph& g, const std::vector<KeywordIndex>& keywords,
                         std::size_t keyword_count);

struct ToyStep {
    std::size_t step = 0;  // 1-based removal count
    MeanStd nmi;
    MeanStd normalized_size;
    std::size_t runs = 0;  // runs that reached this step
};

struct ToyRun {
    KeywordStrategy strategy = KeywordStrategy::dependent;
    double rho = 0;
    GreedyMode mode = GreedyMode::best;
    std::size_t runs = 0;
    std::vector<ToyStep> steps;
};

struct ToyOptions {
    KeywordStrategy strategy = KeywordStrategy::dependent;
    double rho = 0.2385;
    GreedyMode mode = GreedyMode::best;
    std::size_t runs = 50;
};

// Per run: generate a graph, assign keywords, detect the baseline, follow the
// greedy removal sequence and record NMI and normalized size per step.
// Runs execute in parallel (detection.workers); every run derives its seeds
// from (seed, run index), so the result does not depend on the worker count.
ToyRun toy_experiment(const LfrConfig& cfg, const ToyOptions& options, const DetectionConfig& detection,
                      std::uint64_t seed);

}  // namespace citenet
