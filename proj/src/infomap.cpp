#include "citenet/infomap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "citenet/error.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

constexpr double kMinImprovement = 1e-10;
constexpr std::size_t kMaxSweeps = 1000;
constexpr std::size_t kMaxRefinementRounds = 20;

// Maps arbitrary labels to 0..k-1 in order of first appearance.
std::uint32_t densify(std::span<const std::uint32_t> labels, std::vector<std::uint32_t>& dense) {
    dense.resize(labels.size());
    std::unordered_map<std::uint32_t, std::uint32_t> index;
    index.reserve(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) {
        auto [it, inserted] = index.emplace(labels[v], static_cast<std::uint32_t>(index.size()));
        dense[v] = it->second;
    }
    return static_cast<std::uint32_t>(index.size());
}

std::vector<std::uint32_t> identity(std::size_t n) {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return ids;
}

// Greedy sweeps in random order. Each node moves to the neighboring module
// (or an empty module) with the most negative codelength delta. Returns the
// number of moves.
std::size_t local_moves(const FlowNetwork& net, MapEquation& state, std::mt19937_64& rng) {
    const std::size_t n = net.size();
    std::vector<std::uint32_t> order = identity(n);
    std::vector<std::int64_t> weight_to(n, 0);
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> empty_modules;
    for (std::uint32_t m = 0; m < n; ++m)
        if (state.members(m) == 0) empty_modules.push_back(m);

    std::size_t total_moves = 0;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t moves = 0;
        for (const auto v : order) {
            const auto current = state.module_of()[v];
            for (auto e = net.offsets[v]; e < net.offsets[v + 1]; ++e) {
                const auto m = state.module_of()[net.targets[e]];
                if (weight_to[m] == 0) touched.push_back(m);
                weight_to[m] += net.weights[e];
            }
            const auto to_current = weight_to[current];
            std::uint32_t best = current;
            std::int64_t best_weight = to_current;
            double best_delta = -kMinImprovement;
            for (const auto m : touched) {
                if (m == current) continue;
                const double d = state.delta(v, m, to_current, weight_to[m]);
                if (d < best_delta) {
                    best_delta = d;
                    best = m;
                    best_weight = weight_to[m];
                }
            }
            if (state.members(current) > 1) {
                while (!empty_modules.empty() && state.members(empty_modules.back()) != 0) empty_modules.pop_back();
                if (!empty_modules.empty()) {
                    const auto m = empty_modules.back();
                    const double d = state.delta(v, m, to_current, 0);
                    if (d < best_delta) {
                        best_delta = d;
                        best = m;
                        best_weight = 0;
                    }
                }
            }
            for (const auto m : touched) weight_to[m] = 0;
            touched.clear();
            if (best != current) {
                state.move(v, best, to_current, best_weight);
                if (state.members(current) == 0) empty_modules.push_back(current);
                ++moves;
            }
        }
        total_moves += moves;
        if (moves == 0) break;
    }
    return total_moves;
}

// Repeatedly aggregates modules into nodes and moves those, starting from the
// partition in `node_module` (dense labels). Updates `node_module` in place.
void coarsen(const FlowNetwork& base, std::vector<std::uint32_t>& node_module, std::uint32_t module_count,
             std::mt19937_64& rng) {
    FlowNetwork current = base.aggregate(node_module, module_count);
    std::vector<std::uint32_t> dense;
    while (current.size() > 1) {
        MapEquation state(current, identity(current.size()));
        if (local_moves(current, state, rng) == 0) break;
        const auto count = densify(state.module_of(), dense);
        for (auto& m : node_module) m = dense[m];
        current = current.aggregate(dense, count);
    }
}

}  // namespace

std::size_t Partition::module_count() const {
    if (labels.empty()) return 0;
    std::vector<CommunityLabel> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

FlowNetwork FlowNetwork::from_graph(const CitationGraph& g) {
    FlowNetwork net;
    const std::size_t n = g.size();
    net.offsets.assign(n + 1, 0);
    net.volume.resize(n);
    net.exit_weight.resize(n);
    for (NodeIndex v = 0; v < n; ++v) {
        const auto k = static_cast<std::int64_t>(g.neighbors(v).size());
        net.offsets[v + 1] = net.offsets[v] + g.neighbors(v).size();
        net.volume[v] = k;
        net.exit_weight[v] = k;
        net.total_volume += k;
    }
    net.targets.reserve(net.offsets.back());
    for (NodeIndex v = 0; v < n; ++v)
        for (NodeIndex u : g.neighbors(v)) net.targets.push_back(u);
    net.weights.assign(net.targets.size(), 1);
    if (net.total_volume > 0) {
        const double total = static_cast<double>(net.total_volume);
        for (auto k : net.volume)
            if (k > 0) {
                const double p = static_cast<double>(k) / total;
                net.node_entropy_term += p * std::log2(p);
            }
    }
    return net;
}

FlowNetwork FlowNetwork::aggregate(std::span<const std::uint32_t> module_of, std::uint32_t module_count) const {
    FlowNetwork out;
    out.total_volume = total_volume;
    out.node_entropy_term = node_entropy_term;
    out.volume.assign(module_count, 0);
    out.exit_weight.assign(module_count, 0);
    out.offsets.assign(module_count + 1, 0);

    // Bucket nodes by module.
    std::vector<std::size_t> start(module_count + 1, 0);
    for (auto m : module_of) ++start[m + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::uint32_t> nodes(size());
    {
        std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
        for (std::uint32_t v = 0; v < size(); ++v) nodes[cursor[module_of[v]]++] = v;
    }

    std::vector<std::int64_t> accum(module_count, 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t m = 0; m < module_count; ++m) {
        for (auto i = start[m]; i < start[m + 1]; ++i) {
            const auto v = nodes[i];
            out.volume[m] += volume[v];
            for (auto e = offsets[v]; e < offsets[v + 1]; ++e) {
                const auto t = module_of[targets[e]];
                if (t == m) continue;
                if (accum[t] == 0) touched.push_back(t);
                accum[t] += weights[e];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto t : touched) {
            out.targets.push_back(t);
            out.weights.push_back(accum[t]);
            out.exit_weight[m] += accum[t];
            accum[t] = 0;
        }
        touched.clear();
        out.offsets[m + 1] = out.targets.size();
    }
    return out;
}

MapEquation::MapEquation(const FlowNetwork& net, std::vector<std::uint32_t> module_of)
    : net_(&net), module_of_(std::move(module_of)) {
    const std::size_t n = net.size();
    if (module_of_.size() != n) throw InvalidPartition("module assignment does not cover the network");
    module_exit_.assign(n, 0);
    module_volume_.assign(n, 0);
    members_.assign(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto m = module_of_[v];
        if (m >= n) throw InvalidPartition("module id out of range");
        ++members_[m];
        module_volume_[m] += net.volume[v];
        for (auto e = net.offsets[v]; e < net.offsets[v + 1]; ++e)
            if (module_of_[net.targets[e]] != m) module_exit_[m] += net.weights[e];
    }
    for (std::uint32_t m = 0; m < n; ++m) {
        total_exit_ += module_exit_[m];
        sum_exit_log_ += plogp(module_exit_[m]);
        sum_exit_flow_log_ += flow_term(module_exit_[m], module_volume_[m]);
    }
}

double MapEquation::plogp(std::int64_t count) const {
    if (count <= 0) return 0.0;
    const double p = static_cast<double>(count) / static_cast<double>(net_->total_volume);
    return p * std::log2(p);
}

double MapEquation::flow_term(std::int64_t exit, std::int64_t volume) const {
    return plogp(exit + volume);
}

double MapEquation::codelength() const {
    return plogp(total_exit_) - 2.0 * sum_exit_log_ - net_->node_entropy_term + sum_exit_flow_log_;
}

double MapEquation::delta(std::uint32_t node, std::uint32_t target, std::int64_t weight_to_current,
                          std::int64_t weight_to_target) const {
    const auto current = module_of_[node];
    if (target == current) return 0.0;
    const auto exit_v = net_->exit_weight[node];
    const auto volume_v = net_->volume[node];

    const auto old_exit_c = module_exit_[current];
    const auto old_exit_t = module_exit_[target];
    const auto old_vol_c = module_volume_[current];
    const auto old_vol_t = module_volume_[target];
    const auto new_exit_c = old_exit_c - exit_v + 2 * weight_to_current;
    const auto new_exit_t = old_exit_t + exit_v - 2 * weight_to_target;
    const auto new_vol_c = old_vol_c - volume_v;
    const auto new_vol_t = old_vol_t + volume_v;
    const auto new_total = total_exit_ - old_exit_c - old_exit_t + new_exit_c + new_exit_t;

    const double d_total = plogp(new_total) - plogp(total_exit_);
    const double d_exit = plogp(new_exit_c) + plogp(new_exit_t) - plogp(old_exit_c) - plogp(old_exit_t);
    const double d_flow = flow_term(new_exit_c, new_vol_c) + flow_term(new_exit_t, new_vol_t) -
                          flow_term(old_exit_c, old_vol_c) - flow_term(old_exit_t, old_vol_t);
    return d_total - 2.0 * d_exit + d_flow;
}

void MapEquation::move(std::uint32_t node, std::uint32_t target, std::int64_t weight_to_current,
                       std::int64_t weight_to_target) {
    const auto current = module_of_[node];
    if (target == current) return;
    const auto exit_v = net_->exit_weight[node];
    const auto volume_v = net_->volume[node];

    for (auto m : {current, target}) {
        sum_exit_log_ -= plogp(module_exit_[m]);
        sum_exit_flow_log_ -= flow_term(module_exit_[m], module_volume_[m]);
        total_exit_ -= module_exit_[m];
    }
    module_exit_[current] += -exit_v + 2 * weight_to_current;
    module_exit_[target] += exit_v - 2 * weight_to_target;
    module_volume_[current] -= volume_v;
    module_volume_[target] += volume_v;
    --members_[current];
    ++members_[target];
    module_of_[node] = target;
    for (auto m : {current, target}) {
        sum_exit_log_ += plogp(module_exit_[m]);
        sum_exit_flow_log_ += flow_term(module_exit_[m], module_volume_[m]);
        total_exit_ += module_exit_[m];
    }
}

std::int64_t MapEquation::weight_to_module(std::uint32_t node, std::uint32_t module) const {
    std::int64_t w = 0;
    for (auto e = net_->offsets[node]; e < net_->offsets[node + 1]; ++e)
        if (module_of_[net_->targets[e]] == module) w += net_->weights[e];
    return w;
}

double MapEquation::delta(std::uint32_t node, std::uint32_t target) const {
    return delta(node, target, weight_to_module(node, module_of_[node]), weight_to_module(node, target));
}

void MapEquation::move(std::uint32_t node, std::uint32_t target) {
    move(node, target, weight_to_module(node, module_of_[node]), weight_to_module(node, target));
}

double map_equation_codelength(const CitationGraph& g, std::span<const CommunityLabel> labels) {
    if (labels.size() != g.size()) throw InvalidPartition("partition does not label every node");
    const auto m = g.undirected_edge_count();
    if (m == 0) throw DegenerateInput("map equation needs at least one edge");

    std::vector<std::uint32_t> module;
    const auto count = densify(labels, module);
    std::vector<std::int64_t> cut(count, 0);
    std::vector<std::int64_t> volume(count, 0);
    for (NodeIndex u = 0; u < g.size(); ++u) {
        volume[module[u]] += static_cast<std::int64_t>(g.neighbors(u).size());
        for (NodeIndex v : g.neighbors(u))
            if (module[u] != module[v]) ++cut[module[u]];
    }

    const double total = 2.0 * static_cast<double>(m);
    auto plogp = [total](double count) {
        if (count <= 0) return 0.0;
        const double p = count / total;
        return p * std::log2(p);
    };
    double exit_sum = 0;
    double exit_log = 0;
    double flow_log = 0;
    for (std::uint32_t i = 0; i < count; ++i) {
        exit_sum += static_cast<double>(cut[i]);
        exit_log += plogp(static_cast<double>(cut[i]));
        flow_log += plogp(static_cast<double>(cut[i] + volume[i]));
    }
    double node_log = 0;
    for (NodeIndex v = 0; v < g.size(); ++v) node_log += plogp(static_cast<double>(g.neighbors(v).size()));
    return plogp(exit_sum) - 2.0 * exit_log - node_log + flow_log;
}

std::vector<CommunityLabel> canonical_labels(std::span<const CommunityLabel> labels) {
    std::vector<std::uint32_t> dense;
    const auto count = densify(labels, dense);
    std::vector<std::size_t> sizes(count, 0);
    for (auto m : dense) ++sizes[m];
    // Dense ids already follow first appearance; a stable sort by size keeps
    // that order among equal sizes.
    std::vector<std::uint32_t> order = identity(count);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });
    std::vector<CommunityLabel> rank(count);
    for (std::uint32_t r = 0; r < count; ++r) rank[order[r]] = r;
    std::vector<CommunityLabel> out(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) out[v] = rank[dense[v]];
    return out;
}

Partition optimize_once(const CitationGraph& g, const FlowNetwork& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> node_module;
    {
        MapEquation state(net, identity(net.size()));
        local_moves(net, state, rng);
        node_module = state.module_of();
    }
    std::vector<std::uint32_t> dense;
    auto count = densify(node_module, dense);
    node_module.swap(dense);

    for (std::size_t round = 0; round < kMaxRefinementRounds; ++round) {
        coarsen(net, node_module, count, rng);
        count = densify(node_module, dense);
        node_module.swap(dense);
        MapEquation fine(net, node_module);
        if (local_moves(net, fine, rng) == 0) break;
        count = densify(fine.module_of(), node_module);
    }

    Partition result;
    result.labels = canonical_labels(node_module);
    result.codelength = map_equation_codelength(g, result.labels);
    return result;
}

Partition detect_communities(const CitationGraph& g, const DetectionConfig& cfg) {
    if (cfg.trials == 0) throw std::invalid_argument("detection needs at least one trial");
    if (g.undirected_edge_count() == 0) {
        Partition p;
        p.labels = identity(g.size());
        return p;
    }
    const auto net = FlowNetwork::from_graph(g);
    std::mutex best_mutex;
    Partition best;
    std::size_t best_trial = std::numeric_limits<std::size_t>::max();
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        auto candidate = optimize_once(g, net, mix_seed(cfg.seed, t));
        std::lock_guard lock(best_mutex);
        const bool better = best_trial == std::numeric_limits<std::size_t>::max() ||
                            candidate.codelength < best.codelength ||
                            (candidate.codelength == best.codelength && t < best_trial);
        if (better) {
            best = std::move(candidate);
            best_trial = t;
        }
    });
    return best;
}

}  // namespace citenet
