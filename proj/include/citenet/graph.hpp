#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace citenet {

using NodeIndex = std::uint32_t;
using KeywordIndex = std::uint32_t;
using DirectedEdge = std::pair<NodeIndex, NodeIndex>;

// Per-node keyword sets in compressed row form.
class KeywordIncidence {
public:
    KeywordIncidence() : offsets_{0} {}

    void push_back(std::span<const KeywordIndex> keywords) {
        values_.insert(values_.end(), keywords.begin(), keywords.end());
        offsets_.push_back(values_.size());
    }

    std::span<const KeywordIndex> operator[](std::size_t node) const {
        return {values_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
    }

    bool contains(std::size_t node, KeywordIndex keyword) const;

    std::size_t size() const { return offsets_.size() - 1; }

    void reserve(std::size_t nodes, std::size_t entries) {
        offsets_.reserve(nodes + 1);
        values_.reserve(entries);
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<KeywordIndex> values_;
};

// Simple directed graph over documents, stored as out-, in- and undirected
// (simplified) adjacency in CSR form. Neighbor lists are sorted.
class CitationGraph {
public:
    CitationGraph() = default;

    // Loops and duplicate edges in `edges` are dropped.
    CitationGraph(std::vector<std::string> node_ids, std::vector<DirectedEdge> edges,
                  KeywordIncidence keywords = {});

    std::size_t size() const { return node_ids_.size(); }
    std::size_t edge_count() const { return out_targets_.size(); }
    std::size_t undirected_edge_count() const { return und_targets_.size() / 2; }

    std::span<const NodeIndex> out_neighbors(NodeIndex v) const {
        return slice(out_offsets_, out_targets_, v);
    }
    std::span<const NodeIndex> in_neighbors(NodeIndex v) const {
        return slice(in_offsets_, in_targets_, v);
    }
    std::span<const NodeIndex> neighbors(NodeIndex v) const {
        return slice(und_offsets_, und_targets_, v);
    }

    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const KeywordIncidence& keywords() const { return keywords_; }

    std::vector<DirectedEdge> edges() const;

private:
    static std::span<const NodeIndex> slice(const std::vector<std::size_t>& offsets,
                                            const std::vector<NodeIndex>& targets, NodeIndex v) {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }

    std::vector<std::string> node_ids_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeIndex> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeIndex> in_targets_;
    std::vector<std::size_t> und_offsets_{0};
    std::vector<NodeIndex> und_targets_;
    KeywordIncidence keywords_;
};

// Subgraph induced by `keep` (indices into g, in the order given).
CitationGraph induced_subgraph(const CitationGraph& g, std::span<const NodeIndex> keep);

// Weak component label per node, components numbered in order of first node.
std::vector<std::uint32_t> weak_components(const CitationGraph& g);

// Node indices of the largest weakly connected component, ascending. Ties go
// to the component whose sorted node-id list is lexicographically smallest.
std::vector<NodeIndex> largest_weak_component(const CitationGraph& g);

struct NodeDegree {
    std::uint32_t in = 0;
    std::uint32_t out = 0;
    std::uint32_t all = 0;  // undirected simplification

    bool operator==(const NodeDegree&) const = default;
};

std::vector<NodeDegree> degrees(const CitationGraph& g);
std::vector<double> clustering_coefficient(const CitationGraph& g);
std::vector<double> avg_neighbor_degree(const CitationGraph& g);

struct TopologyProfile {
    double mean_k_all = 0;
    double mean_k_in = 0;
    double mean_k_out = 0;
    double mean_clustering = 0;
    double size = 0;
    double mean_neighbor_degree = 0;

    static constexpr std::size_t kFeatureCount = 6;
    std::vector<double> features() const {
        return {mean_k_all, mean_k_in, mean_k_out, mean_clustering, size, mean_neighbor_degree};
    }
};

TopologyProfile topology_profile(const CitationGraph& g);

struct PcaProjection {
    // coordinates[i][c] is profile i on component c.
    std::vector<std::vector<double>> coordinates;
    std::vector<double> explained_variance_ratio;
    // Indices (into TopologyProfile::features()) of the features kept after
    // dropping zero-variance ones.
    std::vector<std::size_t> used_features;
};

// Z-scores the six features, drops constant ones, and projects onto the
// eigenvectors of their covariance, largest eigenvalue first. Each
// eigenvector's largest-magnitude loading is made positive.
PcaProjection pca_project(std::span<const TopologyProfile> profiles);

}  // namespace citenet
