#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "citenet/corpus.hpp"
#include "citenet/error.hpp"

using namespace citenet;

namespace {

// Documents 1-3 mention "alpha", 4-5 mention "beta".
std::vector<Document> five_docs(bool bridge = false, bool both = false) {
    std::vector<Document> docs{
        {"1", "Alpha study", "", {"2"}},
        {"2", "", "on ALPHA things", {"3"}},
        {"3", "alpha again", "", bridge ? std::vector<std::string>{"4"} : std::vector<std::string>{}},
        {"4", "Beta", "", {"5"}},
        {"5", "", "beta only", {}},
    };
    if (both) docs[2].abstract = "and beta";
    return docs;
}

const KeywordSet kAlphaBeta({"alpha", "beta"});

std::vector<std::string> sorted_ids(const CitationGraph& g) {
    auto ids = g.node_ids();
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

TEST(Keywords, CaseFoldedSubstringMatch) {
    Document d{"x", "Deep LEARNING for graphs", "we study deep learning", {}};
    const KeywordSet ks({"deep learning", "graph", "learning for", "tree"});
    EXPECT_EQ(match_keywords(d, ks), (std::vector<KeywordIndex>{0, 1, 2}));
}

TEST(Keywords, NoMatchAcrossTitleAbstractBoundary) {
    Document d{"x", "network", "science", {}};
    EXPECT_TRUE(match_keywords(d, KeywordSet({"networkscience"})).empty());
    EXPECT_EQ(match_keywords(d, KeywordSet({"network science"})).size(), 1u);
}

TEST(Keywords, RejectsDuplicateAndEmptyPhrases) {
    EXPECT_THROW(KeywordSet({"Graph", "graph"}), SchemaError);
    EXPECT_THROW(KeywordSet({""}), SchemaError);
}

TEST(Keywords, ReadFileSkipsCommentsAndBlanks) {
    std::istringstream in("# comment\n\n  alpha  \nbeta\n");
    const auto ks = read_keywords(in);
    EXPECT_EQ(ks.phrases(), (std::vector<std::string>{"alpha", "beta"}));
    std::istringstream empty("# nothing\n");
    EXPECT_THROW(read_keywords(empty), SchemaError);
}

TEST(Corpus, MatchResolvesCitations) {
    auto docs = five_docs();
    docs.push_back({"6", "unrelated", "", {"1"}});
    docs[0].references.push_back("missing");
    docs[0].references.push_back("1");
    docs[0].references.push_back("2");
    const auto m = match_corpus(docs, kAlphaBeta);
    EXPECT_EQ(m.size(), 5u);
    EXPECT_EQ(m.citations, (std::vector<DirectedEdge>{{0, 1}, {1, 2}, {3, 4}}));
}

TEST(Corpus, DuplicateIdIsSchemaError) {
    auto docs = five_docs();
    docs[1].id = "1";
    EXPECT_THROW(match_corpus(docs, kAlphaBeta), SchemaError);
}

TEST(Corpus, RemovingBetaLeavesAlphaChain) {
    const auto g = build_network(five_docs(), kAlphaBeta, {1});
    EXPECT_EQ(sorted_ids(g), (std::vector<std::string>{"1", "2", "3"}));
    EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Corpus, FullSetTakesLargestComponent) {
    EXPECT_EQ(build_network(five_docs(), kAlphaBeta, {}).size(), 3u);
    const auto g = build_network(five_docs(true), kAlphaBeta, {});
    EXPECT_EQ(g.size(), 5u);
    EXPECT_EQ(g.edge_count(), 4u);
}

TEST(Corpus, DocumentWithRemainingKeywordSurvives) {
    const auto g = build_network(five_docs(true, true), kAlphaBeta, {0});
    EXPECT_EQ(sorted_ids(g), (std::vector<std::string>{"3", "4", "5"}));
}

TEST(Corpus, EmptyNetworkThrows) {
    EXPECT_THROW(build_network(five_docs(), kAlphaBeta, {0, 1}), EmptyNetwork);
    std::vector<Document> isolated{{"a", "alpha", "", {}}, {"b", "alpha", "", {}}};
    EXPECT_THROW(build_network(isolated, kAlphaBeta, {}), EmptyNetwork);
}

TEST(Corpus, NetworkSizeAgreesWithBuild) {
    const auto syn = synthetic_corpus({.documents = 800, .keywords = 6, .topics = 12}, 5);
    const auto m = match_corpus(syn.documents, syn.keywords);
    for (KeywordIndex a = 0; a < 6; ++a)
        for (KeywordIndex b = a; b < 6; ++b) {
            KeywordSelection removed{a, b};
            std::size_t expect = 0;
            try {
                expect = build_network(m, removed).size();
            } catch (const EmptyNetwork&) {
            }
            EXPECT_EQ(network_size(m, removed), expect);
        }
    EXPECT_THROW(network_size(m, {6}), std::out_of_range);
}

TEST(Corpus, JsonlRoundTrip) {
    const auto docs = five_docs(true);
    std::stringstream s;
    write_corpus(s, docs);
    const auto back = read_corpus(s);
    ASSERT_EQ(back.size(), docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        EXPECT_EQ(back[i].id, docs[i].id);
        EXPECT_EQ(back[i].title, docs[i].title);
        EXPECT_EQ(back[i].abstract, docs[i].abstract);
        EXPECT_EQ(back[i].references, docs[i].references);
    }
}

TEST(Corpus, MalformedLineIsSchemaError) {
    std::istringstream bad("{\"id\": \"1\", \"title\": \"x\"}\n{\"title\": \"no id\"}\n");
    EXPECT_THROW(read_corpus(bad), SchemaError);
    std::istringstream garbage("not json\n");
    EXPECT_THROW(read_corpus(garbage), SchemaError);
    EXPECT_THROW(read_corpus(std::filesystem::path("/nonexistent/corpus.jsonl")), IoError);
}

TEST(Corpus, SyntheticCorpusIsDeterministic) {
    const SyntheticCorpusConfig cfg{.documents = 300, .keywords = 5, .topics = 10};
    const auto a = synthetic_corpus(cfg, 11);
    const auto b = synthetic_corpus(cfg, 11);
    std::stringstream sa, sb;
    write_corpus(sa, a.documents);
    write_corpus(sb, b.documents);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(a.keywords.size(), 5u);
}

TEST(Corpus, ParallelMatchEqualsSerial) {
    const auto syn = synthetic_corpus({.documents = 2000, .keywords = 8, .topics = 20}, 2);
    const auto serial = match_corpus(syn.documents, syn.keywords, 1);
    const auto parallel = match_corpus(syn.documents, syn.keywords, 4);
    EXPECT_EQ(serial.ids, parallel.ids);
    EXPECT_EQ(serial.citations, parallel.citations);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        const auto a = serial.incidence[i];
        const auto b = parallel.incidence[i];
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
}
