#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/graph.hpp"
#include "citenet/infomap.hpp"
#include "citenet/metrics.hpp"

namespace citenet {

// The unmodified network and its detected communities; every modified
// network is compared against this.
struct Baseline {
    CitationGraph graph;
    Partition partition;
};

Baseline analyze_baseline(const MatchedCorpus& matched, const DetectionConfig& cfg);

struct SweepRow {
    KeywordIndex keyword = 0;
    // False when removing the keyword leaves no connected network; the
    // remaining fields are then unset.
    bool present = false;
    TopologyProfile profile;
    MetricReport metrics;
    double normalized_size = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t modules = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // one per keyword, keyword order
};

// Removes each keyword alone, rebuilds, re-detects with the same config and
// compares against the baseline on shared nodes. Rows are computed in
// parallel (cfg.workers); detection inside each row runs serially.
SweepResult single_removal_sweep(const MatchedCorpus& matched, const Baseline& baseline, const DetectionConfig& cfg);

struct MeanStd {
    double mean = 0;
    double std = 0;  // population
};

MeanStd mean_std(const std::vector<double>& values);

struct SweepSummary {
    MeanStd nmi;
    MeanStd ami;
    MeanStd ari;
    MeanStd vme;
    MeanStd normalized_size;
    std::size_t rows = 0;
};

// Statistics over present rows. Throws std::invalid_argument if there are none.
SweepSummary summarize_sweep(const SweepResult& sweep);

enum class GreedyMode { best, worst };

std::string to_string(GreedyMode mode);
GreedyMode parse_greedy_mode(const std::string& text);

struct GreedyStep {
    KeywordIndex keyword = 0;
    // True for a final removal that left no connected network.
    bool network_empty = false;
    double normalized_size = 0;
    MetricReport metrics;
    std::size_t nodes = 0;
    std::size_t modules = 0;
};

struct GreedyTrace {
    GreedyMode mode = GreedyMode::best;
    std::vector<GreedyStep> steps;
};

// Stepwise keyword removal. Best mode removes the keyword whose removal keeps
// the largest network; worst mode the one leaving the smallest. Sizes are
// largest-component sizes; ties go to the earlier keyword. Stops when one
// keyword remains or a removal empties the network.
GreedyTrace greedy_sequence(const MatchedCorpus& matched, const Baseline& baseline, GreedyMode mode,
                            const DetectionConfig& cfg);

// NMI between the labels and a uniformly shuffled copy of themselves.
double shuffled_baseline(const Partition& p, std::uint64_t seed);

struct CommunityPurity {
    CommunityLabel community = 0;
    std::size_t size = 0;
    KeywordIndex keyword = 0;  // most frequent; earliest wins ties
    double fraction = 0;
};

struct PuritySummary {
    std::vector<CommunityPurity> communities;  // ordered by label
    double mean = 0;
    double std = 0;
};

// Throws std::invalid_argument if a node carries no keyword.
PuritySummary keyword_purity(const Partition& p, const KeywordIncidence& incidence);

}  // namespace citenet
