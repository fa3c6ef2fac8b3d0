#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"

namespace fixtures {

// Three keywords. Four hub documents carry all of them and form a chain;
// keyword k additionally owns exclusive[k] documents, each citing hub 0.
inline citenet::MatchedCorpus three_keywords(std::array<std::size_t, 3> exclusive = {10, 5, 1}) {
    using namespace citenet;
    MatchedCorpus m;
    m.keyword_count = 3;
    const std::vector<KeywordIndex> all{0, 1, 2};
    for (int h = 0; h < 4; ++h) {
        m.ids.push_back("hub" + std::to_string(h));
        m.incidence.push_back(all);
        if (h > 0) m.citations.push_back({static_cast<NodeIndex>(h), static_cast<NodeIndex>(h - 1)});
    }
    for (KeywordIndex k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < exclusive[k]; ++i) {
            const auto v = static_cast<NodeIndex>(m.ids.size());
            m.ids.push_back("k" + std::to_string(k) + "_" + std::to_string(i));
            const std::vector<KeywordIndex> own{k};
            m.incidence.push_back(own);
            m.citations.push_back({v, 0});
        }
    std::sort(m.citations.begin(), m.citations.end());
    return m;
}

// Removal order chosen by exhaustive search: among all orders, the one whose
// sequence of remaining-network sizes is lexicographically largest (best) or
// smallest (worst). Stops one keyword short, like the greedy procedure.
inline std::vector<citenet::KeywordIndex> exhaustive_order(const citenet::MatchedCorpus& m, bool best) {
    using namespace citenet;
    std::vector<KeywordIndex> order(m.keyword_count);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<KeywordIndex> chosen;
    std::vector<std::size_t> chosen_sizes;
    do {
        std::vector<std::size_t> sizes;
        KeywordSelection removed;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            removed.insert(order[i]);
            sizes.push_back(network_size(m, removed));
        }
        const bool take = chosen.empty() || (best ? sizes > chosen_sizes : sizes < chosen_sizes);
        if (take) {
            chosen.assign(order.begin(), order.end() - 1);
            chosen_sizes = sizes;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return chosen;
}

}  // namespace fixtures
