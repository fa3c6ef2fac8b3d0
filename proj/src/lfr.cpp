#include "citenet/lfr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_set>

#include "citenet/error.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

// Continuous power law with density ~ x^-exponent on [lo, hi].
class PowerLaw {
public:
    PowerLaw(double exponent, double lo, double hi) : exponent_(exponent), lo_(lo), hi_(hi) {}

    double operator()(std::mt19937_64& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        if (std::abs(exponent_ - 1.0) < 1e-12) return lo_ * std::pow(hi_ / lo_, u);
        const double e = 1.0 - exponent_;
        const double a = std::pow(lo_, e);
        const double b = std::pow(hi_, e);
        return std::pow(a + u * (b - a), 1.0 / e);
    }

    static double mean(double exponent, double lo, double hi) {
        if (std::abs(exponent - 1.0) < 1e-12) return (hi - lo) / std::log(hi / lo);
        if (std::abs(exponent - 2.0) < 1e-12) return std::log(hi / lo) / (1.0 / lo - 1.0 / hi);
        const double e1 = 1.0 - exponent;
        const double e2 = 2.0 - exponent;
        return (e1 / e2) * (std::pow(hi, e2) - std::pow(lo, e2)) / (std::pow(hi, e1) - std::pow(lo, e1));
    }

private:
    double exponent_;
    double lo_;
    double hi_;
};

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Configuration-model pairing of `stubs` followed by rewiring of invalid
// pairs against random valid edges. `allowed(a, b)` says whether a pair may
// exist at all (apart from loops and duplicates, which are always invalid).
template <class Allowed>
std::vector<Edge> wire(std::vector<std::uint32_t> stubs, std::unordered_set<std::uint64_t>& existing,
                       Allowed allowed, std::size_t max_sweeps, std::mt19937_64& rng) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<Edge> good;
    std::vector<Edge> bad;
    auto valid = [&](std::uint32_t a, std::uint32_t b) {
        return a != b && allowed(a, b) && !existing.contains(edge_key(a, b));
    };
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        const auto a = stubs[i];
        const auto b = stubs[i + 1];
        if (valid(a, b)) {
            existing.insert(edge_key(a, b));
            good.emplace_back(a, b);
        } else {
            bad.emplace_back(a, b);
        }
    }

    std::bernoulli_distribution coin(0.5);
    for (std::size_t sweep = 0; sweep < max_sweeps && !bad.empty() && !good.empty(); ++sweep) {
        std::vector<Edge> still_bad;
        for (const auto& [a, b] : bad) {
            const auto i = std::uniform_int_distribution<std::size_t>(0, good.size() - 1)(rng);
            auto [x, y] = good[i];
            if (coin(rng)) std::swap(x, y);
            // Replace {a,b} + {x,y} with {a,x} + {b,y}.
            const bool ok = valid(a, x) && valid(b, y) && edge_key(a, x) != edge_key(b, y);
            if (!ok) {
                still_bad.emplace_back(a, b);
                continue;
            }
            existing.erase(edge_key(x, y));
            existing.insert(edge_key(a, x));
            existing.insert(edge_key(b, y));
            good[i] = {a, x};
            good.emplace_back(b, y);
        }
        bad.swap(still_bad);
    }
    return good;
}

std::optional<std::vector<std::size_t>> sample_community_sizes(const LfrConfig& cfg, std::mt19937_64& rng) {
    const PowerLaw law(cfg.community_exponent, static_cast<double>(cfg.min_community),
                       static_cast<double>(cfg.max_community));
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    while (total < cfg.n) {
        auto s = static_cast<std::size_t>(std::llround(law(rng)));
        s = std::clamp(s, cfg.min_community, cfg.max_community);
        if (total + s <= cfg.n) {
            sizes.push_back(s);
            total += s;
            continue;
        }
        std::size_t left = cfg.n - total;
        if (left >= cfg.min_community) {
            sizes.push_back(left);
            break;
        }
        std::size_t room = 0;
        for (auto x : sizes) room += cfg.max_community - x;
        if (room < left || sizes.empty()) return std::nullopt;
        while (left > 0) {
            const auto i = std::uniform_int_distribution<std::size_t>(0, sizes.size() - 1)(rng);
            if (sizes[i] < cfg.max_community) {
                ++sizes[i];
                --left;
            }
        }
        break;
    }
    return sizes;
}

std::optional<LfrGraph> attempt(const LfrConfig& cfg, std::mt19937_64& rng) {
    const auto sizes = sample_community_sizes(cfg, rng);
    if (!sizes || sizes->size() != cfg.communities) return std::nullopt;
    const std::size_t n = cfg.n;

    const double min_degree = solve_min_degree(cfg.gamma, static_cast<double>(cfg.max_degree), cfg.mean_degree);
    const PowerLaw degree_law(-cfg.gamma, min_degree, static_cast<double>(cfg.max_degree));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::uint32_t> internal(n);
    std::vector<std::uint32_t> external(n);
    for (std::size_t v = 0; v < n; ++v) {
        auto k = static_cast<std::uint32_t>(std::llround(degree_law(rng)));
        k = std::clamp<std::uint32_t>(k, 1, static_cast<std::uint32_t>(cfg.max_degree));
        // Stochastic rounding keeps the expected external fraction at mu for
        // every degree.
        external[v] = static_cast<std::uint32_t>(std::floor(cfg.mu * k + unit(rng)));
        external[v] = std::min(external[v], k);
        internal[v] = k - external[v];
    }

    // Largest internal degrees first, random order among equals.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return internal[a] > internal[b]; });
    std::vector<std::size_t> capacity(*sizes);
    std::vector<std::uint32_t> community(n);
    for (auto v : order) {
        std::size_t weight = 0;
        for (std::size_t c = 0; c < capacity.size(); ++c)
            if ((*sizes)[c] > internal[v]) weight += capacity[c];
        if (weight == 0) return std::nullopt;
        auto r = std::uniform_int_distribution<std::size_t>(0, weight - 1)(rng);
        for (std::size_t c = 0; c < capacity.size(); ++c) {
            if ((*sizes)[c] <= internal[v]) continue;
            if (r < capacity[c]) {
                community[v] = static_cast<std::uint32_t>(c);
                --capacity[c];
                break;
            }
            r -= capacity[c];
        }
    }

    std::unordered_set<std::uint64_t> existing;
    existing.reserve(static_cast<std::size_t>(cfg.mean_degree * static_cast<double>(n)));
    std::vector<DirectedEdge> edges;

    std::vector<std::vector<std::uint32_t>> members(cfg.communities);
    for (std::uint32_t v = 0; v < n; ++v) members[community[v]].push_back(v);
    for (const auto& group : members) {
        std::vector<std::uint32_t> stubs;
        for (auto v : group) stubs.insert(stubs.end(), internal[v], v);
        if (stubs.size() % 2 == 1) stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(
                                                   std::uniform_int_distribution<std::size_t>(0, stubs.size() - 1)(rng)));
        for (const auto& [a, b] : wire(std::move(stubs), existing, [](auto, auto) { return true; },
                                       cfg.max_rewiring_sweeps, rng))
            edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    {
        std::vector<std::uint32_t> stubs;
        for (std::uint32_t v = 0; v < n; ++v) stubs.insert(stubs.end(), external[v], v);
        if (stubs.size() % 2 == 1) stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(
                                                   std::uniform_int_distribution<std::size_t>(0, stubs.size() - 1)(rng)));
        auto across = [&](std::uint32_t a, std::uint32_t b) { return community[a] != community[b]; };
        for (const auto& [a, b] : wire(std::move(stubs), existing, across, cfg.max_rewiring_sweeps, rng))
            edges.emplace_back(std::min(a, b), std::max(a, b));
    }

    std::vector<std::string> ids(n);
    for (std::size_t v = 0; v < n; ++v) ids[v] = std::to_string(v);
    LfrGraph out;
    out.graph = CitationGraph(std::move(ids), std::move(edges));
    out.planted.labels.assign(community.begin(), community.end());
    return out;
}

}  // namespace

void LfrConfig::validate() const {
    if (!(mu > 0 && mu < 1)) throw ConfigError("mixing parameter must lie in (0, 1)");
    if (!(gamma < 0)) throw ConfigError("degree exponent gamma must be negative");
    if (min_community < 1 || min_community > max_community || max_community > n)
        throw ConfigError("community size bounds must satisfy 1 <= S_min <= S_max <= n");
    if (max_degree >= n) throw ConfigError("k_max must be below n");
    if (communities == 0 || communities * min_community > n || n > communities * max_community)
        throw ConfigError("C * S_min <= n <= C * S_max must hold");
    if (!(mean_degree >= 1 && mean_degree < static_cast<double>(max_degree)))
        throw ConfigError("mean degree must lie in [1, k_max)");
    if (!(community_exponent > 0)) throw ConfigError("community size exponent must be positive");
    if (max_attempts == 0) throw ConfigError("max_attempts must be positive");
}

LfrConfig LfrConfig::table_row(int row) {
    LfrConfig cfg;
    switch (row) {
        case 1:
            cfg.n = 2000;
            cfg.max_degree = 200;
            cfg.communities = 8;
            break;
        case 2:
            cfg.n = 4000;
            cfg.max_degree = 400;
            cfg.communities = 16;
            break;
        case 3:
            cfg.n = 8000;
            cfg.max_degree = 800;
            cfg.communities = 32;
            break;
        default:
            throw ConfigError("benchmark table rows are 1, 2 and 3");
    }
    return cfg;
}

double solve_min_degree(double gamma, double max_degree, double mean_degree) {
    const double exponent = -gamma;
    double lo = 1.0;
    double hi = mean_degree;
    if (PowerLaw::mean(exponent, lo, max_degree) > mean_degree)
        throw ConfigError("mean degree is below what k_min = 1 allows");
    // The mean grows monotonically with the lower bound.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (PowerLaw::mean(exponent, mid, max_degree) < mean_degree)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

LfrGraph generate_lfr(const LfrConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    for (std::size_t a = 0; a < cfg.max_attempts; ++a) {
        std::mt19937_64 rng(mix_seed(seed, a));
        if (auto g = attempt(cfg, rng)) return std::move(*g);
    }
    throw GenerationFailure("no benchmark graph with " + std::to_string(cfg.communities) + " communities after " +
                            std::to_string(cfg.max_attempts) + " attempts");
}

double realized_mixing(const CitationGraph& g, const Partition& planted) {
    double total = 0;
    std::size_t counted = 0;
    for (NodeIndex v = 0; v < g.size(); ++v) {
        const auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        std::size_t outside = 0;
        for (auto u : nbrs)
            if (planted.labels[u] != planted.labels[v]) ++outside;
        total += static_cast<double>(outside) / static_cast<double>(nbrs.size());
        ++counted;
    }
    return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

std::string to_string(KeywordStrategy strategy) {
    switch (strategy) {
        case KeywordStrategy::dependent:
            return "dependent";
        case KeywordStrategy::independent:
            return "independent";
        case KeywordStrategy::shuffled:
            return "shuffled";
    }
    return "unknown";
}

KeywordStrategy parse_keyword_strategy(const std::string& text) {
    if (text == "dependent") return KeywordStrategy::dependent;
    if (text == "independent") return KeywordStrategy::independent;
    if (text == "shuffled") return KeywordStrategy::shuffled;
    throw ConfigError("unknown keyword strategy '" + text + "'");
}

std::vector<KeywordIndex> assign_keywords(const Partition& planted, KeywordStrategy strategy, double rho,
                                          std::uint64_t seed) {
    std::vector<KeywordIndex> keywords(planted.labels.begin(), planted.labels.end());
    std::mt19937_64 rng(seed);
    switch (strategy) {
        case KeywordStrategy::dependent:
            break;
        case KeywordStrategy::independent:
            std::shuffle(keywords.begin(), keywords.end(), rng);
            break;
        case KeywordStrategy::shuffled: {
            if (!(rho >= 0 && rho <= 1)) throw std::invalid_argument("rho must lie in [0, 1]");
            const auto n = keywords.size();
            const auto count = static_cast<std::size_t>(std::floor(rho * static_cast<double>(n)));
            std::vector<std::size_t> positions(n);
            std::iota(positions.begin(), positions.end(), std::size_t{0});
            // Partial Fisher-Yates: the first `count` entries are a uniform subset.
            for (std::size_t i = 0; i < count; ++i) {
                const auto j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
                std::swap(positions[i], positions[j]);
            }
            positions.resize(count);
            std::vector<KeywordIndex> values;
            values.reserve(count);
            for (auto p : positions) values.push_back(keywords[p]);
            std::shuffle(values.begin(), values.end(), rng);
            for (std::size_t i = 0; i < count; ++i) keywords[positions[i]] = values[i];
            break;
        }
    }
    return keywords;
}

MatchedCorpus toy_corpus(const CitationGraph& g, const std::vector<KeywordIndex>& keywords,
                         std::size_t keyword_count) {
    if (keywords.size() != g.size()) throw std::invalid_argument("one keyword per node expected");
    MatchedCorpus mc;
    mc.keyword_count = keyword_count;
    mc.ids = g.node_ids();
    mc.incidence.reserve(g.size(), g.size());
    for (auto k : keywords) {
        if (k >= keyword_count) throw std::out_of_range("keyword label out of range");
        mc.incidence.push_back(std::span<const KeywordIndex>(&k, 1));
    }
    mc.citations = g.edges();
    return mc;
}

ToyRun toy_experiment(const LfrConfig& cfg, const ToyOptions& options, const DetectionConfig& detection,
                      std::uint64_t seed) {
    if (options.runs == 0) throw std::invalid_argument("toy experiment needs at least one run");
    cfg.validate();
    std::vector<GreedyTrace> traces(options.runs);
    parallel_for(options.runs, detection.workers, [&](std::size_t r) {
        const auto run_seed = mix_seed(seed, r);
        const auto lfr = generate_lfr(cfg, mix_seed(run_seed, 0));
        const auto keywords = assign_keywords(lfr.planted, options.strategy, options.rho, mix_seed(run_seed, 1));
        const auto corpus = toy_corpus(lfr.graph, keywords, cfg.communities);
        DetectionConfig dc = detection;
        dc.workers = 1;
        dc.seed = mix_seed(run_seed, 2);
        const auto baseline = analyze_baseline(corpus, dc);
        traces[r] = greedy_sequence(corpus, baseline, options.mode, dc);
    });

    ToyRun out;
    out.strategy = options.strategy;
    out.rho = options.strategy == KeywordStrategy::shuffled ? options.rho : 0.0;
    out.mode = options.mode;
    out.runs = options.runs;
    std::size_t longest = 0;
    for (const auto& t : traces) longest = std::max(longest, t.steps.size());
    for (std::size_t s = 0; s < longest; ++s) {
        std::vector<double> nmi;
        std::vector<double> size;
        for (const auto& t : traces) {
            if (s >= t.steps.size() || t.steps[s].network_empty) continue;
            nmi.push_back(t.steps[s].metrics.nmi);
            size.push_back(t.steps[s].normalized_size);
        }
        if (nmi.empty()) break;
        ToyStep step;
        step.step = s + 1;
        step.nmi = mean_std(nmi);
        step.normalized_size = mean_std(size);
        step.runs = nmi.size();
        out.steps.push_back(step);
    }
    return out;
}

}  // namespace citenet
