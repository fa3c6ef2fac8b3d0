#include "citenet/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "citenet/error.hpp"
#include "citenet/parallel.hpp"
#include "disjoint_sets.hpp"

namespace citenet {

namespace {

std::vector<bool> removal_mask(std::size_t keyword_count, const KeywordSelection& removed) {
    std::vector<bool> mask(keyword_count, false);
    for (auto k : removed) {
        if (k >= keyword_count) throw std::out_of_range("removed keyword index out of range");
        mask[k] = true;
    }
    return mask;
}

std::vector<bool> retained_documents(const MatchedCorpus& matched, const KeywordSelection& removed) {
    const auto mask = removal_mask(matched.keyword_count, removed);
    std::vector<bool> keep(matched.size(), false);
    for (std::size_t d = 0; d < matched.size(); ++d)
        for (auto k : matched.incidence[d])
            if (!mask[k]) {
                keep[d] = true;
                break;
            }
    return keep;
}

struct ComponentChoice {
    std::vector<bool> member;
    std::size_t size = 0;
};

// Largest weak component among retained documents, singletons excluded.
ComponentChoice largest_component(const MatchedCorpus& matched, const std::vector<bool>& keep) {
    detail::DisjointSets sets(matched.size());
    for (const auto& [u, v] : matched.citations)
        if (keep[u] && keep[v]) sets.unite(u, v);
    std::vector<std::size_t> sizes(matched.size(), 0);
    for (std::uint32_t d = 0; d < matched.size(); ++d)
        if (keep[d]) ++sizes[sets.find(d)];

    ComponentChoice choice;
    const auto best = std::max_element(sizes.begin(), sizes.end());
    if (best == sizes.end() || *best < 2) return choice;
    choice.size = *best;

    std::vector<std::uint32_t> roots;
    for (std::uint32_t d = 0; d < matched.size(); ++d)
        if (sizes[d] == choice.size) roots.push_back(d);
    std::uint32_t root = roots.front();
    if (roots.size() > 1) {
        std::unordered_map<std::uint32_t, std::vector<std::string_view>> members;
        for (auto r : roots) members[r];
        for (std::uint32_t d = 0; d < matched.size(); ++d) {
            if (!keep[d]) continue;
            auto it = members.find(sets.find(d));
            if (it != members.end()) it->second.push_back(matched.ids[d]);
        }
        for (auto& [r, list] : members) std::sort(list.begin(), list.end());
        for (auto r : roots)
            if (members[r] < members[root]) root = r;
    }
    choice.member.assign(matched.size(), false);
    for (std::uint32_t d = 0; d < matched.size(); ++d)
        if (keep[d] && sets.find(d) == root) choice.member[d] = true;
    return choice;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

KeywordSet::KeywordSet(std::vector<std::string> phrases) : phrases_(std::move(phrases)) {
    folded_.reserve(phrases_.size());
    for (const auto& p : phrases_) {
        if (p.empty()) throw SchemaError("empty keyword phrase");
        auto f = fold_case(p);
        if (std::find(folded_.begin(), folded_.end(), f) != folded_.end())
            throw SchemaError("duplicate keyword phrase: " + p);
        folded_.push_back(std::move(f));
    }
}

std::vector<KeywordIndex> match_keywords(const Document& doc, const KeywordSet& keywords) {
    std::string text;
    text.reserve(doc.title.size() + doc.abstract.size() + 1);
    text += doc.title;
    text += ' ';
    text += doc.abstract;
    text = fold_case(text);
    std::vector<KeywordIndex> hits;
    for (std::size_t i = 0; i < keywords.size(); ++i)
        if (text.find(keywords.folded()[i]) != std::string::npos) hits.push_back(static_cast<KeywordIndex>(i));
    return hits;
}

MatchedCorpus match_corpus(std::span<const Document> corpus, const KeywordSet& keywords, unsigned workers) {
    if (keywords.empty()) throw std::invalid_argument("keyword set is empty");
    std::vector<std::vector<KeywordIndex>> hits(corpus.size());
    parallel_for(corpus.size(), workers, [&](std::size_t d) { hits[d] = match_keywords(corpus[d], keywords); });

    MatchedCorpus matched;
    matched.keyword_count = keywords.size();
    std::unordered_map<std::string_view, NodeIndex> index;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        if (corpus[d].id.empty()) throw SchemaError("document with empty id");
        if (hits[d].empty()) continue;
        const auto slot = static_cast<NodeIndex>(matched.ids.size());
        if (!index.emplace(corpus[d].id, slot).second) throw SchemaError("duplicate document id: " + corpus[d].id);
        matched.ids.push_back(corpus[d].id);
        matched.incidence.push_back(hits[d]);
    }
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        if (hits[d].empty()) continue;
        const auto source = index.at(corpus[d].id);
        for (const auto& ref : corpus[d].references) {
            auto it = index.find(ref);
            if (it == index.end() || it->second == source) continue;
            matched.citations.emplace_back(source, it->second);
        }
    }
    std::sort(matched.citations.begin(), matched.citations.end());
    matched.citations.erase(std::unique(matched.citations.begin(), matched.citations.end()),
                            matched.citations.end());
    return matched;
}

CitationGraph build_network(const MatchedCorpus& matched, const KeywordSelection& removed) {
    const auto keep = retained_documents(matched, removed);
    const auto component = largest_component(matched, keep);
    if (component.size == 0) throw EmptyNetwork("no connected documents remain after keyword removal");

    std::vector<NodeIndex> remap(matched.size(), 0);
    std::vector<std::string> ids;
    ids.reserve(component.size);
    KeywordIncidence incidence;
    for (std::size_t d = 0; d < matched.size(); ++d) {
        if (!component.member[d]) continue;
        remap[d] = static_cast<NodeIndex>(ids.size());
        ids.push_back(matched.ids[d]);
        incidence.push_back(matched.incidence[d]);
    }
    std::vector<DirectedEdge> edges;
    for (const auto& [u, v] : matched.citations)
        if (component.member[u] && component.member[v]) edges.emplace_back(remap[u], remap[v]);
    return CitationGraph(std::move(ids), std::move(edges), std::move(incidence));
}

CitationGraph build_network(std::span<const Document> corpus, const KeywordSet& keywords,
                            const KeywordSelection& removed) {
    return build_network(match_corpus(corpus, keywords), removed);
}

std::size_t network_size(const MatchedCorpus& matched, const KeywordSelection& removed) {
    const auto keep = retained_documents(matched, removed);
    detail::DisjointSets sets(matched.size());
    for (const auto& [u, v] : matched.citations)
        if (keep[u] && keep[v]) sets.unite(u, v);
    std::vector<std::size_t> sizes(matched.size(), 0);
    std::size_t best = 0;
    for (std::uint32_t d = 0; d < matched.size(); ++d)
        if (keep[d]) best = std::max(best, ++sizes[sets.find(d)]);
    return best >= 2 ? best : 0;
}

std::vector<Document> read_corpus(std::istream& in) {
    std::vector<Document> corpus;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        try {
            const auto record = nlohmann::json::parse(line);
            Document doc;
            doc.id = record.at("id").get<std::string>();
            doc.title = record.value("title", std::string{});
            doc.abstract = record.value("abstract", std::string{});
            if (record.contains("references"))
                doc.references = record.at("references").get<std::vector<std::string>>();
            if (doc.id.empty()) throw SchemaError("empty id");
            corpus.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("corpus line " + std::to_string(line_number) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw SchemaError("corpus line " + std::to_string(line_number) + ": " + e.what());
        }
    }
    return corpus;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file " + path.string());
    return read_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const Document> corpus) {
    for (const auto& doc : corpus) {
        nlohmann::json record = {{"id", doc.id},
                                 {"title", doc.title},
                                 {"abstract", doc.abstract},
                                 {"references", doc.references}};
        out << record.dump() << '\n';
    }
}

KeywordSet read_keywords(std::istream& in) {
    std::vector<std::string> phrases;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        phrases.emplace_back(t);
    }
    if (phrases.empty()) throw SchemaError("keyword file contains no phrases");
    return KeywordSet(std::move(phrases));
}

KeywordSet read_keywords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open keyword file " + path.string());
    return read_keywords(in);
}

SyntheticCorpus synthetic_corpus(const SyntheticCorpusConfig& config, std::uint64_t seed) {
    if (config.keywords == 0 || config.topics == 0) throw std::invalid_argument("need keywords and topics");
    std::mt19937_64 rng(seed);

    std::vector<std::string> phrases;
    for (std::size_t k = 0; k < config.keywords; ++k) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "subject %04zu analysis", k);
        phrases.emplace_back(buf);
    }

    // Zipf popularity, so one keyword dominates the query like a broad
    // umbrella term would.
    std::vector<double> popularity(config.keywords);
    for (std::size_t k = 0; k < config.keywords; ++k) popularity[k] = 1.0 / static_cast<double>(k + 1);
    std::discrete_distribution<std::size_t> pick_keyword(popularity.begin(), popularity.end());
    std::vector<std::size_t> home_keyword(config.topics);
    for (auto& h : home_keyword) h = pick_keyword(rng);

    std::uniform_int_distribution<std::size_t> pick_topic(0, config.topics - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> reference_count(config.mean_references);
    std::vector<std::vector<std::uint32_t>> by_topic(config.topics);

    SyntheticCorpus result;
    result.documents.reserve(config.documents);
    for (std::size_t d = 0; d < config.documents; ++d) {
        char id[24];
        std::snprintf(id, sizeof id, "D%08zu", d);
        Document doc;
        doc.id = id;
        const auto topic = pick_topic(rng);
        if (unit(rng) < config.unmatched_fraction) {
            doc.title = "Unrelated study";
        } else {
            const auto primary = unit(rng) < config.keyword_affinity ? home_keyword[topic] : pick_keyword(rng);
            doc.title = "On " + phrases[primary];
            if (unit(rng) < config.second_keyword_probability)
                doc.abstract = "We relate it to " + phrases[pick_keyword(rng)] + ".";
        }
        const int refs = d == 0 ? 0 : reference_count(rng);
        for (int r = 0; r < refs; ++r) {
            if (unit(rng) < config.dangling_reference_fraction) {
                char ext[24];
                std::snprintf(ext, sizeof ext, "X%08zu", static_cast<std::size_t>(rng() % 100000000));
                doc.references.emplace_back(ext);
                continue;
            }
            const auto& local = by_topic[topic];
            std::size_t target;
            if (!local.empty() && unit(rng) < config.topic_affinity)
                target = local[std::uniform_int_distribution<std::size_t>(0, local.size() - 1)(rng)];
            else
                target = std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
            std::snprintf(id, sizeof id, "D%08zu", target);
            doc.references.emplace_back(id);
        }
        by_topic[topic].push_back(static_cast<std::uint32_t>(d));
        result.documents.push_back(std::move(doc));
    }
    result.keywords = KeywordSet(std::move(phrases));
    return result;
}

}  // namespace citenet
