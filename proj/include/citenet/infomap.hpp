#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "citenet/graph.hpp"

namespace citenet {

using CommunityLabel = std::uint32_t;

struct Partition {
    std::vector<CommunityLabel> labels;
    double codelength = 0;  // bits per step; 0 when not produced by detection

    std::size_t module_count() const;
};

struct DetectionConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;  // 0 = all cores
};

// Undirected network with integer edge weights, the working representation
// of the optimizer. After aggregation each node stands for a module and its
// internal weight is folded into `volume`.
struct FlowNetwork {
    std::vector<std::size_t> offsets{0};
    std::vector<std::uint32_t> targets;
    std::vector<std::int64_t> weights;
    std::vector<std::int64_t> volume;       // weighted degree, internal edges counted twice
    std::vector<std::int64_t> exit_weight;  // weight of edges to other nodes
    std::int64_t total_volume = 0;          // 2m
    double node_entropy_term = 0;           // sum over original nodes of p log2 p

    static FlowNetwork from_graph(const CitationGraph& g);

    std::size_t size() const { return volume.size(); }

    // Collapses each module into one node; module ids must be dense.
    FlowNetwork aggregate(std::span<const std::uint32_t> module_of, std::uint32_t module_count) const;
};

// Two-level map equation over a FlowNetwork with per-module exit and volume
// kept as exact integers, so a move's delta can be evaluated in O(1) once the
// node's weight toward the source and target modules is known.
class MapEquation {
public:
    MapEquation(const FlowNetwork& net, std::vector<std::uint32_t> module_of);

    double codelength() const;

    double delta(std::uint32_t node, std::uint32_t target, std::int64_t weight_to_current,
                 std::int64_t weight_to_target) const;
    void move(std::uint32_t node, std::uint32_t target, std::int64_t weight_to_current,
              std::int64_t weight_to_target);

    // Neighbor-scanning conveniences.
    std::int64_t weight_to_module(std::uint32_t node, std::uint32_t module) const;
    double delta(std::uint32_t node, std::uint32_t target) const;
    void move(std::uint32_t node, std::uint32_t target);

    const std::vector<std::uint32_t>& module_of() const { return module_of_; }
    std::uint32_t members(std::uint32_t module) const { return members_[module]; }

private:
    double flow_term(std::int64_t exit, std::int64_t volume) const;
    double plogp(std::int64_t count) const;

    const FlowNetwork* net_;
    std::vector<std::uint32_t> module_of_;
    std::vector<std::int64_t> module_exit_;
    std::vector<std::int64_t> module_volume_;
    std::vector<std::uint32_t> members_;
    std::int64_t total_exit_ = 0;
    double sum_exit_log_ = 0;       // sum_i q_i log2 q_i
    double sum_exit_flow_log_ = 0;  // sum_i (q_i + p_i) log2 (q_i + p_i)
};

// Full evaluation of the two-level map equation for unit-weight undirected
// edges. Throws InvalidPartition on a label count mismatch and
// DegenerateInput on an edgeless graph.
double map_equation_codelength(const CitationGraph& g, std::span<const CommunityLabel> labels);

// Relabels so module 0 is the largest; ties keep first-node order.
std::vector<CommunityLabel> canonical_labels(std::span<const CommunityLabel> labels);

// One stochastic optimization attempt: greedy node moves in random order,
// aggregation of modules into nodes, and node-level refinement, repeated
// until the codelength stops improving.
Partition optimize_once(const CitationGraph& g, const FlowNetwork& net, std::uint64_t seed);

// Best of cfg.trials independent attempts; trial t uses mix_seed(cfg.seed, t).
// Ties go to the lowest trial index.
Partition detect_communities(const CitationGraph& g, const DetectionConfig& cfg);

}  // namespace citenet
