#include "citenet/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "citenet/error.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

DetectionConfig serial(DetectionConfig cfg) {
    cfg.workers = 1;
    return cfg;
}

MetricReport against_baseline(const Baseline& baseline, const CitationGraph& g, const Partition& p) {
    return compare_shared(baseline.graph.node_ids(), baseline.partition.labels, g.node_ids(), p.labels);
}

}  // namespace

Baseline analyze_baseline(const MatchedCorpus& matched, const DetectionConfig& cfg) {
    Baseline b;
    b.graph = build_network(matched, {});
    b.partition = detect_communities(b.graph, cfg);
    return b;
}

SweepResult single_removal_sweep(const MatchedCorpus& matched, const Baseline& baseline, const DetectionConfig& cfg) {
    if (matched.keyword_count < 2) throw std::invalid_argument("sweep needs at least two keywords");
    SweepResult result;
    result.rows.resize(matched.keyword_count);
    const double original = static_cast<double>(baseline.graph.size());
    const auto inner = serial(cfg);
    parallel_for(matched.keyword_count, cfg.workers, [&](std::size_t k) {
        auto& row = result.rows[k];
        row.keyword = static_cast<KeywordIndex>(k);
        CitationGraph g;
        try {
            g = build_network(matched, {static_cast<KeywordIndex>(k)});
        } catch (const EmptyNetwork&) {
            return;
        }
        const auto p = detect_communities(g, inner);
        row.present = true;
        row.profile = topology_profile(g);
        row.metrics = against_baseline(baseline, g, p);
        row.normalized_size = static_cast<double>(g.size()) / original;
        row.nodes = g.size();
        row.edges = g.edge_count();
        row.modules = p.module_count();
    });
    return result;
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / n);
    return out;
}

SweepSummary summarize_sweep(const SweepResult& sweep) {
    std::vector<double> nmi, ami, ari, vme, size;
    for (const auto& r : sweep.rows) {
        if (!r.present) continue;
        nmi.push_back(r.metrics.nmi);
        ami.push_back(r.metrics.ami);
        ari.push_back(r.metrics.ari);
        vme.push_back(r.metrics.vme);
        size.push_back(r.normalized_size);
    }
    if (nmi.empty()) throw std::invalid_argument("sweep has no rows to summarize");
    SweepSummary s;
    s.nmi = mean_std(nmi);
    s.ami = mean_std(ami);
    s.ari = mean_std(ari);
    s.vme = mean_std(vme);
    s.normalized_size = mean_std(size);
    s.rows = nmi.size();
    return s;
}

std::string to_string(GreedyMode mode) { return mode == GreedyMode::best ? "best" : "worst"; }

GreedyMode parse_greedy_mode(const std::string& text) {
    if (text == "best") return GreedyMode::best;
    if (text == "worst") return GreedyMode::worst;
    throw ConfigError("unknown greedy mode '" + text + "' (expected best or worst)");
}

GreedyTrace greedy_sequence(const MatchedCorpus& matched, const Baseline& baseline, GreedyMode mode,
                            const DetectionConfig& cfg) {
    if (matched.keyword_count < 2) throw std::invalid_argument("greedy removal needs at least two keywords");
    GreedyTrace trace;
    trace.mode = mode;
    const double original = static_cast<double>(baseline.graph.size());
    std::vector<KeywordIndex> remaining(matched.keyword_count);
    std::iota(remaining.begin(), remaining.end(), 0u);
    KeywordSelection removed;

    while (remaining.size() > 1) {
        std::vector<std::size_t> sizes(remaining.size());
        parallel_for(remaining.size(), cfg.workers, [&](std::size_t i) {
            auto trial = removed;
            trial.insert(remaining[i]);
            sizes[i] = network_size(matched, trial);
        });
        std::size_t pick = 0;
        for (std::size_t i = 1; i < sizes.size(); ++i) {
            const bool better = mode == GreedyMode::best ? sizes[i] > sizes[pick] : sizes[i] < sizes[pick];
            if (better) pick = i;
        }
        GreedyStep step;
        step.keyword = remaining[pick];
        removed.insert(step.keyword);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        if (sizes[pick] == 0) {
            step.network_empty = true;
            trace.steps.push_back(step);
            break;
        }
        const auto g = build_network(matched, removed);
        const auto p = detect_communities(g, cfg);
        step.normalized_size = static_cast<double>(g.size()) / original;
        step.metrics = against_baseline(baseline, g, p);
        step.nodes = g.size();
        step.modules = p.module_count();
        trace.steps.push_back(step);
    }
    return trace;
}

double shuffled_baseline(const Partition& p, std::uint64_t seed) {
    if (p.labels.empty()) throw std::invalid_argument("partition is empty");
    auto shuffled = p.labels;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    return nmi(ContingencyTable(p.labels, shuffled));
}

PuritySummary keyword_purity(const Partition& p, const KeywordIncidence& incidence) {
    if (incidence.size() != p.labels.size()) throw std::invalid_argument("incidence does not match partition");
    PuritySummary out;
    if (p.labels.empty()) return out;
    const auto communities = *std::max_element(p.labels.begin(), p.labels.end()) + 1;

    std::vector<std::vector<std::uint32_t>> members(communities);
    for (std::uint32_t v = 0; v < p.labels.size(); ++v) {
        if (incidence[v].empty()) throw std::invalid_argument("node without keywords");
        members[p.labels[v]].push_back(v);
    }

    KeywordIndex max_keyword = 0;
    for (std::size_t v = 0; v < incidence.size(); ++v)
        for (auto k : incidence[v]) max_keyword = std::max(max_keyword, k);
    std::vector<std::size_t> counts(max_keyword + 1, 0);
    std::vector<KeywordIndex> touched;

    std::vector<double> fractions;
    for (CommunityLabel c = 0; c < communities; ++c) {
        if (members[c].empty()) continue;
        for (auto v : members[c])
            for (auto k : incidence[v]) {
                if (counts[k] == 0) touched.push_back(k);
                ++counts[k];
            }
        CommunityPurity entry;
        entry.community = c;
        entry.size = members[c].size();
        std::sort(touched.begin(), touched.end());
        std::size_t best = 0;
        for (auto k : touched)
            if (counts[k] > best) {
                best = counts[k];
                entry.keyword = k;
            }
        for (auto k : touched) counts[k] = 0;
        touched.clear();
        entry.fraction = static_cast<double>(best) / static_cast<double>(entry.size);
        fractions.push_back(entry.fraction);
        out.communities.push_back(entry);
    }
    const auto stats = mean_std(fractions);
    out.mean = stats.mean;
    out.std = stats.std;
    return out;
}

}  // namespace citenet
