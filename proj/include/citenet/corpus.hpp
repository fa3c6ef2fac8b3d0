#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "citenet/graph.hpp"

namespace citenet {

struct Document {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<std::string> references;
};

using KeywordSelection = std::set<KeywordIndex>;

// Ordered list of distinct query phrases. Phrases are compared after ASCII
// case folding; a duplicate under folding is rejected.
class KeywordSet {
public:
    KeywordSet() = default;
    explicit KeywordSet(std::vector<std::string> phrases);

    std::size_t size() const { return phrases_.size(); }
    bool empty() const { return phrases_.empty(); }
    const std::string& operator[](std::size_t i) const { return phrases_[i]; }
    const std::vector<std::string>& phrases() const { return phrases_; }
    const std::vector<std::string>& folded() const { return folded_; }

private:
    std::vector<std::string> phrases_;
    std::vector<std::string> folded_;
};

std::string fold_case(std::string_view text);

// Indices of every phrase that occurs in "<title> <abstract>" after case
// folding, ascending.
std::vector<KeywordIndex> match_keywords(const Document& doc, const KeywordSet& keywords);

// Documents that matched at least one keyword, with their keyword sets and
// the citations among them resolved to indices. Citations are deduplicated,
// self-citations and citations leaving the matched set are dropped.
struct MatchedCorpus {
    std::vector<std::string> ids;
    KeywordIncidence incidence;
    std::vector<DirectedEdge> citations;
    std::size_t keyword_count = 0;

    std::size_t size() const { return ids.size(); }
};

MatchedCorpus match_corpus(std::span<const Document> corpus, const KeywordSet& keywords,
                           unsigned workers = 1);

// Largest weakly connected component of the citation graph over documents
// that keep at least one keyword after `removed` is taken out.
// Throws EmptyNetwork when nothing (or only isolated documents) remains.
CitationGraph build_network(const MatchedCorpus& matched, const KeywordSelection& removed);
CitationGraph build_network(std::span<const Document> corpus, const KeywordSet& keywords,
                            const KeywordSelection& removed);

// Node count build_network would return, or 0 where it would throw. Avoids
// materializing the graph.
std::size_t network_size(const MatchedCorpus& matched, const KeywordSelection& removed);

// Line-delimited JSON: one object per line with "id", "title", "abstract"
// and "references". Throws IoError / SchemaError.
std::vector<Document> read_corpus(const std::filesystem::path& path);
std::vector<Document> read_corpus(std::istream& in);
void write_corpus(std::ostream& out, std::span<const Document> corpus);

// One phrase per line; blank lines and lines starting with '#' are skipped,
// surrounding whitespace is trimmed.
KeywordSet read_keywords(const std::filesystem::path& path);
KeywordSet read_keywords(std::istream& in);

struct SyntheticCorpusConfig {
    std::size_t documents = 10000;
    std::size_t keywords = 20;
    std::size_t topics = 200;
    double mean_references = 6.0;
    // Probability that a reference stays inside the citing document's topic.
    double topic_affinity = 0.9;
    // Probability that a document carries its topic's home keyword rather
    // than a popularity-weighted random one.
    double keyword_affinity = 0.8;
    double second_keyword_probability = 0.1;
    double unmatched_fraction = 0.05;
    double dangling_reference_fraction = 0.05;
};

struct SyntheticCorpus {
    std::vector<Document> documents;
    KeywordSet keywords;
};

// Topic-clustered corpus with Zipf keyword popularity; documents cite only
// earlier documents.
SyntheticCorpus synthetic_corpus(const SyntheticCorpusConfig& config, std::uint64_t seed);

}  // namespace citenet
