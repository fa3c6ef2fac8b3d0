#include "citenet/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "citenet/error.hpp"
#include "disjoint_sets.hpp"

namespace citenet {

namespace {

void build_csr(std::size_t n, const std::vector<DirectedEdge>& edges, bool reversed,
               std::vector<std::size_t>& offsets, std::vector<NodeIndex>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& [u, v] : edges) ++offsets[(reversed ? v : u) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    targets.resize(edges.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        if (reversed)
            targets[cursor[v]++] = u;
        else
            targets[cursor[u]++] = v;
    }
    for (std::size_t v = 0; v < n; ++v)
        std::sort(targets.begin() + offsets[v], targets.begin() + offsets[v + 1]);
}

}  // namespace

bool KeywordIncidence::contains(std::size_t node, KeywordIndex keyword) const {
    const auto row = (*this)[node];
    return std::find(row.begin(), row.end(), keyword) != row.end();
}

CitationGraph::CitationGraph(std::vector<std::string> node_ids, std::vector<DirectedEdge> edges,
                             KeywordIncidence keywords)
    : node_ids_(std::move(node_ids)), keywords_(std::move(keywords)) {
    const std::size_t n = node_ids_.size();
    if (keywords_.size() != 0 && keywords_.size() != n)
        throw std::invalid_argument("keyword incidence does not match node count");
    std::erase_if(edges, [n](const DirectedEdge& e) {
        if (e.first >= n || e.second >= n) throw std::out_of_range("edge endpoint out of range");
        return e.first == e.second;
    });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    build_csr(n, edges, false, out_offsets_, out_targets_);
    build_csr(n, edges, true, in_offsets_, in_targets_);

    // Undirected simplification: each unordered pair once per endpoint.
    std::vector<DirectedEdge> sym;
    sym.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
        sym.emplace_back(u, v);
        sym.emplace_back(v, u);
    }
    std::sort(sym.begin(), sym.end());
    sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
    build_csr(n, sym, false, und_offsets_, und_targets_);
}

std::vector<DirectedEdge> CitationGraph::edges() const {
    std::vector<DirectedEdge> out;
    out.reserve(edge_count());
    for (NodeIndex u = 0; u < size(); ++u)
        for (NodeIndex v : out_neighbors(u)) out.emplace_back(u, v);
    return out;
}

CitationGraph induced_subgraph(const CitationGraph& g, std::span<const NodeIndex> keep) {
    constexpr NodeIndex kAbsent = ~NodeIndex{0};
    std::vector<NodeIndex> remap(g.size(), kAbsent);
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    KeywordIncidence incidence;
    const bool has_keywords = g.keywords().size() == g.size();
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[keep[i]] = static_cast<NodeIndex>(i);
        ids.push_back(g.node_ids()[keep[i]]);
        if (has_keywords) incidence.push_back(g.keywords()[keep[i]]);
    }
    std::vector<DirectedEdge> edges;
    for (NodeIndex u : keep)
        for (NodeIndex v : g.out_neighbors(u))
            if (remap[v] != kAbsent) edges.emplace_back(remap[u], remap[v]);
    return CitationGraph(std::move(ids), std::move(edges), std::move(incidence));
}

std::vector<std::uint32_t> weak_components(const CitationGraph& g) {
    detail::DisjointSets sets(g.size());
    for (NodeIndex u = 0; u < g.size(); ++u)
        for (NodeIndex v : g.out_neighbors(u)) sets.unite(u, v);
    // Roots are the smallest member, so numbering by root order is
    // numbering by first node.
    std::vector<std::uint32_t> label(g.size());
    std::vector<std::uint32_t> root_label(g.size(), ~0u);
    std::uint32_t next = 0;
    for (NodeIndex v = 0; v < g.size(); ++v) {
        const auto root = sets.find(v);
        if (root_label[root] == ~0u) root_label[root] = next++;
        label[v] = root_label[root];
    }
    return label;
}

std::vector<NodeIndex> largest_weak_component(const CitationGraph& g) {
    if (g.size() == 0) return {};
    const auto label = weak_components(g);
    const auto count = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::size_t> sizes(count, 0);
    for (auto c : label) ++sizes[c];
    const auto best_size = *std::max_element(sizes.begin(), sizes.end());

    std::vector<std::uint32_t> tied;
    for (std::uint32_t c = 0; c < count; ++c)
        if (sizes[c] == best_size) tied.push_back(c);

    auto members = [&](std::uint32_t c) {
        std::vector<NodeIndex> nodes;
        for (NodeIndex v = 0; v < g.size(); ++v)
            if (label[v] == c) nodes.push_back(v);
        return nodes;
    };
    if (tied.size() == 1) return members(tied.front());

    auto sorted_ids = [&](const std::vector<NodeIndex>& nodes) {
        std::vector<std::string_view> ids;
        for (auto v : nodes) ids.push_back(g.node_ids()[v]);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    auto best = members(tied.front());
    auto best_ids = sorted_ids(best);
    for (std::size_t t = 1; t < tied.size(); ++t) {
        auto candidate = members(tied[t]);
        auto candidate_ids = sorted_ids(candidate);
        if (candidate_ids < best_ids) {
            best = std::move(candidate);
            best_ids = std::move(candidate_ids);
        }
    }
    return best;
}

std::vector<NodeDegree> degrees(const CitationGraph& g) {
    std::vector<NodeDegree> result(g.size());
    for (NodeIndex v = 0; v < g.size(); ++v) {
        result[v].in = static_cast<std::uint32_t>(g.in_neighbors(v).size());
        result[v].out = static_cast<std::uint32_t>(g.out_neighbors(v).size());
        result[v].all = static_cast<std::uint32_t>(g.neighbors(v).size());
    }
    return result;
}

std::vector<double> clustering_coefficient(const CitationGraph& g) {
    const std::size_t n = g.size();
    // Forward triangle listing: orient each edge from lower to higher
    // (degree, index) rank, so each triangle is found exactly once.
    auto before = [&](NodeIndex a, NodeIndex b) {
        const auto da = g.neighbors(a).size();
        const auto db = g.neighbors(b).size();
        return da != db ? da < db : a < b;
    };
    std::vector<std::size_t> offsets(n + 1, 0);
    for (NodeIndex v = 0; v < n; ++v)
        for (NodeIndex u : g.neighbors(v))
            if (before(v, u)) ++offsets[v + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeIndex> forward(offsets.back());
    for (NodeIndex v = 0, k = 0; v < n; ++v)
        for (NodeIndex u : g.neighbors(v))
            if (before(v, u)) forward[k++] = u;

    std::vector<std::uint64_t> triangles(n, 0);
    std::vector<NodeIndex> mark(n, ~NodeIndex{0});
    for (NodeIndex v = 0; v < n; ++v) {
        for (auto i = offsets[v]; i < offsets[v + 1]; ++i) mark[forward[i]] = v;
        for (auto i = offsets[v]; i < offsets[v + 1]; ++i) {
            const NodeIndex u = forward[i];
            for (auto j = offsets[u]; j < offsets[u + 1]; ++j) {
                const NodeIndex w = forward[j];
                if (mark[w] == v) {
                    ++triangles[v];
                    ++triangles[u];
                    ++triangles[w];
                }
            }
        }
    }

    std::vector<double> result(n, 0.0);
    for (NodeIndex v = 0; v < n; ++v) {
        const double k = static_cast<double>(g.neighbors(v).size());
        if (k >= 2) result[v] = static_cast<double>(triangles[v]) / (k * (k - 1) / 2);
    }
    return result;
}

std::vector<double> avg_neighbor_degree(const CitationGraph& g) {
    std::vector<double> result(g.size(), 0.0);
    for (NodeIndex v = 0; v < g.size(); ++v) {
        const auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        double total = 0;
        for (NodeIndex u : nbrs) total += static_cast<double>(g.neighbors(u).size());
        result[v] = total / static_cast<double>(nbrs.size());
    }
    return result;
}

TopologyProfile topology_profile(const CitationGraph& g) {
    TopologyProfile p;
    p.size = static_cast<double>(g.size());
    if (g.size() == 0) return p;
    const double n = p.size;
    for (const auto& d : degrees(g)) {
        p.mean_k_all += d.all;
        p.mean_k_in += d.in;
        p.mean_k_out += d.out;
    }
    p.mean_k_all /= n;
    p.mean_k_in /= n;
    p.mean_k_out /= n;
    for (double c : clustering_coefficient(g)) p.mean_clustering += c;
    p.mean_clustering /= n;
    for (double a : avg_neighbor_degree(g)) p.mean_neighbor_degree += a;
    p.mean_neighbor_degree /= n;
    return p;
}

PcaProjection pca_project(std::span<const TopologyProfile> profiles) {
    if (profiles.size() < 2) throw DegenerateInput("PCA needs at least two profiles");
    const auto rows = static_cast<Eigen::Index>(profiles.size());
    Eigen::MatrixXd raw(rows, TopologyProfile::kFeatureCount);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto f = profiles[static_cast<std::size_t>(i)].features();
        for (std::size_t j = 0; j < f.size(); ++j) raw(i, static_cast<Eigen::Index>(j)) = f[j];
    }

    PcaProjection result;
    std::vector<Eigen::VectorXd> columns;
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        Eigen::VectorXd col = raw.col(j).array() - raw.col(j).mean();
        const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(rows));
        // Relative threshold so that rounding noise in a constant column
        // does not count as variance.
        const double scale = std::max(1.0, raw.col(j).cwiseAbs().maxCoeff());
        if (sd <= 1e-12 * scale) continue;
        columns.push_back(col / sd);
        result.used_features.push_back(static_cast<std::size_t>(j));
    }
    if (columns.empty()) throw DegenerateInput("all topology features are constant");

    const auto dims = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd z(rows, dims);
    for (Eigen::Index j = 0; j < dims; ++j) z.col(j) = columns[static_cast<std::size_t>(j)];

    const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(rows - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DegenerateInput("eigen decomposition failed");

    // Eigen returns ascending eigenvalues.
    Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index c = 0; c < dims; ++c) {
        Eigen::Index arg = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, c) < 0) vectors.col(c) *= -1.0;
    }
    values = values.cwiseMax(0.0);
    const double total = values.sum();
    for (Eigen::Index c = 0; c < dims; ++c) result.explained_variance_ratio.push_back(values(c) / total);

    const Eigen::MatrixXd coords = z * vectors;
    result.coordinates.assign(profiles.size(), std::vector<double>(static_cast<std::size_t>(dims)));
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < dims; ++c)
            result.coordinates[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = coords(i, c);
    return result;
}

}  // namespace citenet
