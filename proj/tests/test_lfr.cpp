#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "citenet/error.hpp"
#include "citenet/lfr.hpp"
#include "citenet/metrics.hpp"

using namespace citenet;

namespace {

LfrConfig small() {
    LfrConfig c;
    c.n = 600;
    c.min_community = 40;
    c.max_community = 300;
    c.max_degree = 60;
    c.mean_degree = 12;
    c.communities = 6;
    return c;
}

}  // namespace

TEST(Lfr, MinDegreeGivesRequestedMean) {
    const double kmin = solve_min_degree(-2.0, 200, 20);
    // Mean of k^-2 on [a, b] is ab ln(b/a) / (b - a).
    EXPECT_NEAR(kmin * 200 * std::log(200 / kmin) / (200 - kmin), 20.0, 1e-9);
    EXPECT_GT(kmin, 5.0);
    EXPECT_LT(kmin, 6.0);
}

TEST(Lfr, ConfigValidation) {
    EXPECT_NO_THROW(LfrConfig::table_row(1).validate());
    EXPECT_EQ(LfrConfig::table_row(2).n, 4000u);
    EXPECT_EQ(LfrConfig::table_row(3).communities, 32u);
    EXPECT_THROW(LfrConfig::table_row(4), ConfigError);
    auto c = small();
    c.mu = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small();
    c.min_community = 400;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Lfr, GeneratedGraphInvariants) {
    const auto cfg = small();
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto lfr = generate_lfr(cfg, seed);
        const auto& g = lfr.graph;
        ASSERT_EQ(g.size(), cfg.n);
        EXPECT_EQ(lfr.planted.module_count(), cfg.communities);
        std::map<CommunityLabel, std::size_t> sizes;
        for (auto l : lfr.planted.labels) ++sizes[l];
        for (auto [l, s] : sizes) {
            EXPECT_GE(s, cfg.min_community);
            EXPECT_LE(s, cfg.max_community);
        }
        double total = 0;
        for (NodeIndex v = 0; v < g.size(); ++v) {
            EXPECT_LE(g.neighbors(v).size(), cfg.max_degree);
            total += static_cast<double>(g.neighbors(v).size());
            for (auto u : g.out_neighbors(v)) EXPECT_LT(v, u);
        }
        EXPECT_NEAR(total / cfg.n, cfg.mean_degree, 0.1 * cfg.mean_degree);
        EXPECT_NEAR(realized_mixing(g, lfr.planted), cfg.mu, 0.02);
    }
}

TEST(Lfr, SameSeedSameGraph) {
    const auto a = generate_lfr(small(), 42);
    const auto b = generate_lfr(small(), 42);
    EXPECT_EQ(a.graph.edges(), b.graph.edges());
    EXPECT_EQ(a.planted.labels, b.planted.labels);
}

TEST(Lfr, DetectionRecoversPlantedPartition) {
    const auto lfr = generate_lfr(small(), 5);
    const auto p = detect_communities(lfr.graph, {.trials = 5, .seed = 1});
    EXPECT_GE(compare(p.labels, lfr.planted.labels).nmi, 0.95);
}

TEST(Lfr, ImpossibleCommunityCountFails) {
    auto c = small();
    c.communities = 14;  // 14 * 40 fits but the size law almost never lands there
    c.max_attempts = 3;
    EXPECT_THROW(generate_lfr(c, 1), GenerationFailure);
}

TEST(Keywords, Strategies) {
    Partition planted;
    for (std::uint32_t i = 0; i < 1000; ++i) planted.labels.push_back(i % 4);
    const auto dep = assign_keywords(planted, KeywordStrategy::dependent, 0, 1);
    EXPECT_EQ(std::vector<CommunityLabel>(dep.begin(), dep.end()), planted.labels);

    const auto ind = assign_keywords(planted, KeywordStrategy::independent, 0, 1);
    auto sorted_ind = ind, sorted_dep = dep;
    std::sort(sorted_ind.begin(), sorted_ind.end());
    std::sort(sorted_dep.begin(), sorted_dep.end());
    EXPECT_EQ(sorted_ind, sorted_dep);
    EXPECT_LT(compare(ind, planted.labels).nmi, 0.05);

    const auto sh = assign_keywords(planted, KeywordStrategy::shuffled, 0.2385, 1);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < sh.size(); ++i) changed += sh[i] != planted.labels[i];
    EXPECT_LE(changed, 238u);
    EXPECT_GT(changed, 100u);
    auto sorted_sh = sh;
    std::sort(sorted_sh.begin(), sorted_sh.end());
    EXPECT_EQ(sorted_sh, sorted_dep);

    EXPECT_EQ(assign_keywords(planted, KeywordStrategy::shuffled, 0.0, 3), dep);
    EXPECT_THROW(assign_keywords(planted, KeywordStrategy::shuffled, 1.5, 3), std::invalid_argument);
    EXPECT_THROW(parse_keyword_strategy("random"), ConfigError);
}

TEST(Toy, CurveShapeAndDeterminism) {
    auto cfg = small();
    const ToyOptions opt{.strategy = KeywordStrategy::dependent, .mode = GreedyMode::worst, .runs = 3};
    const DetectionConfig det{.trials = 3, .seed = 0, .workers = 1};
    const auto a = toy_experiment(cfg, opt, det, 9);
    ASSERT_EQ(a.steps.size(), cfg.communities - 1);
    for (std::size_t s = 1; s < a.steps.size(); ++s)
        EXPECT_LT(a.steps[s].normalized_size.mean, a.steps[s - 1].normalized_size.mean);
    auto par = det;
    par.workers = 3;
    const auto b = toy_experiment(cfg, opt, par, 9);
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        EXPECT_EQ(a.steps[s].nmi.mean, b.steps[s].nmi.mean);
        EXPECT_EQ(a.steps[s].normalized_size.mean, b.steps[s].normalized_size.mean);
    }
}

TEST(Keywords, FullShuffleIsUniform) {
    // Position of the single distinguished label after rho = 1 shuffles.
    Partition planted;
    planted.labels = {1, 0, 0, 0, 0};
    std::vector<int> hits(5, 0);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto k = assign_keywords(planted, KeywordStrategy::shuffled, 1.0, s);
        ASSERT_EQ(std::count(k.begin(), k.end(), 1u), 1);
        ++hits[std::find(k.begin(), k.end(), 1u) - k.begin()];
    }
    // Expected 200 per slot; 5 sigma is about 63.
    for (int h : hits) EXPECT_NEAR(h, 200, 63);
}

TEST(Toy, DependentRemovalDropsOneCommunity) {
    const auto lfr = generate_lfr(small(), 8);
    const auto kw = assign_keywords(lfr.planted, KeywordStrategy::dependent, 0, 0);
    const auto corpus = toy_corpus(lfr.graph, kw, small().communities);
    std::map<CommunityLabel, std::size_t> sizes;
    for (auto l : lfr.planted.labels) ++sizes[l];
    for (auto [label, size] : sizes) EXPECT_EQ(network_size(corpus, {label}), small().n - size);
}

TEST(Toy, BestKeepsAtLeastAsMuchAsWorst) {
    const auto lfr = generate_lfr(small(), 3);
    const auto kw = assign_keywords(lfr.planted, KeywordStrategy::independent, 0, 4);
    const auto corpus = toy_corpus(lfr.graph, kw, small().communities);
    const DetectionConfig det{.trials = 2, .seed = 1};
    const auto baseline = analyze_baseline(corpus, det);
    const auto best = greedy_sequence(corpus, baseline, GreedyMode::best, det);
    const auto worst = greedy_sequence(corpus, baseline, GreedyMode::worst, det);
    for (std::size_t s = 0; s < std::min(best.steps.size(), worst.steps.size()); ++s)
        EXPECT_GE(best.steps[s].normalized_size, worst.steps[s].normalized_size);
}
