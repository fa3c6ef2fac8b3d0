#include <gtest/gtest.h>

#include <cmath>

#include "citenet/error.hpp"
#include "citenet/perturbation.hpp"
#include "fixtures.hpp"

using namespace citenet;

namespace {

const DetectionConfig kFast{.trials = 5, .seed = 1, .workers = 1};

std::vector<KeywordIndex> order_of(const GreedyTrace& t) {
    std::vector<KeywordIndex> out;
    for (const auto& s : t.steps) out.push_back(s.keyword);
    return out;
}

}  // namespace

TEST(Summary, MeanAndPopulationStd) {
    SweepResult sweep;
    for (double x : {0.9, 1.0}) {
        SweepRow row;
        row.present = true;
        row.metrics.nmi = x;
        row.normalized_size = x;
        sweep.rows.push_back(row);
    }
    sweep.rows.push_back(SweepRow{});  // absent rows are skipped
    const auto s = summarize_sweep(sweep);
    EXPECT_EQ(s.rows, 2u);
    EXPECT_NEAR(s.nmi.mean, 0.95, 1e-15);
    EXPECT_NEAR(s.nmi.std, 0.05, 1e-15);
    EXPECT_THROW(summarize_sweep(SweepResult{}), std::invalid_argument);
}

TEST(Purity, MostFrequentKeywordFraction) {
    KeywordIncidence inc;
    const std::vector<KeywordIndex> a{0}, b{1}, ab{0, 1};
    inc.push_back(a);
    inc.push_back(a);
    inc.push_back(ab);
    inc.push_back(b);
    inc.push_back(b);
    inc.push_back(b);
    Partition p;
    p.labels = {0, 0, 0, 0, 1, 1};
    const auto r = keyword_purity(p, inc);
    ASSERT_EQ(r.communities.size(), 2u);
    EXPECT_EQ(r.communities[0].keyword, 0u);
    EXPECT_DOUBLE_EQ(r.communities[0].fraction, 0.75);
    EXPECT_DOUBLE_EQ(r.communities[1].fraction, 1.0);
    EXPECT_DOUBLE_EQ(r.mean, 0.875);
    EXPECT_DOUBLE_EQ(r.std, 0.125);
}

TEST(Purity, TieGoesToEarlierKeyword) {
    KeywordIncidence inc;
    const std::vector<KeywordIndex> a{2}, b{1};
    inc.push_back(a);
    inc.push_back(b);
    Partition p;
    p.labels = {0, 0};
    EXPECT_EQ(keyword_purity(p, inc).communities[0].keyword, 1u);
}

TEST(ShuffledBaseline, MatchesPermutationEnumeration) {
    // Over all 24 orderings of {0,0,1,1} the NMI is 1 for 8 and 0 for 16.
    Partition p;
    p.labels = {0, 0, 1, 1};
    double sum = 0;
    const int draws = 6000;
    for (int s = 0; s < draws; ++s) {
        const double v = shuffled_baseline(p, static_cast<std::uint64_t>(s));
        EXPECT_TRUE(std::abs(v) < 1e-12 || std::abs(v - 1) < 1e-12) << v;
        sum += v;
    }
    EXPECT_NEAR(sum / draws, 1.0 / 3.0, 0.02);
}

TEST(Greedy, ModeParsing) {
    EXPECT_EQ(parse_greedy_mode("best"), GreedyMode::best);
    EXPECT_EQ(parse_greedy_mode("worst"), GreedyMode::worst);
    EXPECT_THROW(parse_greedy_mode("median"), ConfigError);
}

TEST(Greedy, OrderFollowsExclusiveCounts) {
    const auto m = fixtures::three_keywords();
    const auto baseline = analyze_baseline(m, kFast);
    EXPECT_EQ(baseline.graph.size(), 20u);
    const auto worst = greedy_sequence(m, baseline, GreedyMode::worst, kFast);
    const auto best = greedy_sequence(m, baseline, GreedyMode::best, kFast);
    EXPECT_EQ(order_of(worst), (std::vector<KeywordIndex>{0, 1}));
    EXPECT_EQ(order_of(best), (std::vector<KeywordIndex>{2, 1}));
    EXPECT_EQ(order_of(worst), fixtures::exhaustive_order(m, false));
    EXPECT_EQ(order_of(best), fixtures::exhaustive_order(m, true));
    EXPECT_DOUBLE_EQ(best.steps[0].normalized_size, 19.0 / 20.0);
    EXPECT_DOUBLE_EQ(worst.steps[1].normalized_size, 5.0 / 20.0);
}

TEST(Greedy, PermutedCountsAgreeWithEnumeration) {
    for (std::array<std::size_t, 3> counts : {std::array<std::size_t, 3>{1, 10, 5}, {5, 1, 10}, {3, 3, 7}}) {
        const auto m = fixtures::three_keywords(counts);
        const auto baseline = analyze_baseline(m, kFast);
        EXPECT_EQ(order_of(greedy_sequence(m, baseline, GreedyMode::worst, kFast)),
                  fixtures::exhaustive_order(m, false));
        EXPECT_EQ(order_of(greedy_sequence(m, baseline, GreedyMode::best, kFast)),
                  fixtures::exhaustive_order(m, true));
    }
}

TEST(Greedy, RecordsEmptyingRemoval) {
    // Keyword 0 owns the only citation, so worst mode removes it first and
    // nothing connected is left.
    MatchedCorpus m;
    m.keyword_count = 2;
    const std::vector<KeywordIndex> k0{0}, k1{1};
    m.ids = {"a", "b", "c"};
    m.incidence.push_back(k0);
    m.incidence.push_back(k0);
    m.incidence.push_back(k1);
    m.citations = {{0, 1}};
    const auto baseline = analyze_baseline(m, kFast);
    const auto t = greedy_sequence(m, baseline, GreedyMode::worst, kFast);
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_EQ(t.steps[0].keyword, 0u);
    EXPECT_TRUE(t.steps[0].network_empty);
}

TEST(Sweep, RowsPerKeyword) {
    const auto syn = synthetic_corpus({.documents = 600, .keywords = 5, .topics = 10}, 3);
    const auto m = match_corpus(syn.documents, syn.keywords);
    const auto baseline = analyze_baseline(m, kFast);
    const auto serial = single_removal_sweep(m, baseline, kFast);
    ASSERT_EQ(serial.rows.size(), 5u);
    for (const auto& r : serial.rows) {
        ASSERT_TRUE(r.present);
        EXPECT_LE(r.nodes, baseline.graph.size());
        EXPECT_DOUBLE_EQ(r.normalized_size, static_cast<double>(r.nodes) / baseline.graph.size());
        EXPECT_NEAR(r.metrics.vme, r.metrics.nmi, 1e-12);
        EXPECT_GE(r.metrics.nmi, 0.0);
        EXPECT_LE(r.metrics.nmi, 1.0);
    }
    auto parallel_cfg = kFast;
    parallel_cfg.workers = 3;
    const auto parallel = single_removal_sweep(m, baseline, parallel_cfg);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(serial.rows[k].nodes, parallel.rows[k].nodes);
        EXPECT_EQ(serial.rows[k].metrics.nmi, parallel.rows[k].metrics.nmi);
    }
}

TEST(Sweep, UnmatchedKeywordGivesIdentityRow) {
    auto syn = synthetic_corpus({.documents = 500, .keywords = 4, .topics = 8}, 6);
    auto phrases = syn.keywords.phrases();
    phrases.push_back("zzz never appears");
    const KeywordSet ks(phrases);
    const auto m = match_corpus(syn.documents, ks);
    const auto baseline = analyze_baseline(m, kFast);
    const auto sweep = single_removal_sweep(m, baseline, kFast);
    const auto& row = sweep.rows.back();
    ASSERT_TRUE(row.present);
    EXPECT_EQ(row.nodes, baseline.graph.size());
    EXPECT_EQ(row.metrics.nmi, 1.0);
    EXPECT_EQ(row.metrics.ami, 1.0);
    EXPECT_EQ(row.metrics.ari, 1.0);
    EXPECT_EQ(row.metrics.vme, 1.0);
    EXPECT_EQ(row.normalized_size, 1.0);
}

TEST(Greedy, SizesNonIncreasingAndBestAboveWorst) {
    const auto syn = synthetic_corpus({.documents = 800, .keywords = 6, .topics = 12}, 4);
    const auto m = match_corpus(syn.documents, syn.keywords);
    const auto baseline = analyze_baseline(m, kFast);
    const auto best = greedy_sequence(m, baseline, GreedyMode::best, kFast);
    const auto worst = greedy_sequence(m, baseline, GreedyMode::worst, kFast);
    for (const auto* t : {&best, &worst})
        for (std::size_t s = 1; s < t->steps.size(); ++s)
            if (!t->steps[s].network_empty)
                EXPECT_LE(t->steps[s].normalized_size, t->steps[s - 1].normalized_size);
    for (std::size_t s = 0; s < std::min(best.steps.size(), worst.steps.size()); ++s)
        EXPECT_GE(best.steps[s].normalized_size, worst.steps[s].normalized_size);
}
