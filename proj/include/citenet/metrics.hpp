#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citenet/infomap.hpp"

namespace citenet {

// Sparse cross-tabulation of two labelings of the same items.
class ContingencyTable {
public:
    struct Cell {
        std::uint32_t row;
        std::uint32_t col;
        std::uint64_t count;
    };

    // Labels are arbitrary; rows/columns are numbered by first appearance.
    ContingencyTable(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v);

    std::uint64_t total() const { return total_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<std::uint64_t>& row_sums() const { return rows_; }
    const std::vector<std::uint64_t>& col_sums() const { return cols_; }

    // True when every row and every column has exactly one nonzero cell,
    // i.e. the two labelings are the same partition.
    bool is_identity() const;

private:
    std::vector<Cell> cells_;
    std::vector<std::uint64_t> rows_;
    std::vector<std::uint64_t> cols_;
    std::uint64_t total_ = 0;
};

// Natural-log entropies and mutual information of a table.
double entropy_rows(const ContingencyTable& t);
double entropy_cols(const ContingencyTable& t);
double mutual_information(const ContingencyTable& t);

// Expected mutual information under the hypergeometric model with the
// table's marginals. Equal marginal values are grouped, so the cost depends
// on the number of distinct cluster sizes rather than on the cluster count.
double expected_mutual_information(const ContingencyTable& t);

double nmi(const ContingencyTable& t);
double ami(const ContingencyTable& t);
double ari(const ContingencyTable& t);
double v_measure(const ContingencyTable& t, double beta = 1.0);

struct MetricReport {
    double nmi = 0;
    double ami = 0;
    double ari = 0;
    double vme = 0;
    double beta = 1.0;
    std::size_t shared_n = 0;
};

MetricReport compare(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v, double beta = 1.0);

struct AlignedLabels {
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> second;
    // Node ids in the order of the aligned vectors (order of the first set).
    std::vector<std::string> ids;
};

// Label vectors over the nodes present in both partitions, aligned by node
// id. Throws EmptyIntersection when no node is shared.
AlignedLabels restrict_to_shared(std::span<const std::string> ids_a, std::span<const std::uint32_t> labels_a,
                                 std::span<const std::string> ids_b, std::span<const std::uint32_t> labels_b);

MetricReport compare_shared(std::span<const std::string> ids_a, std::span<const std::uint32_t> labels_a,
                            std::span<const std::string> ids_b, std::span<const std::uint32_t> labels_b,
                            double beta = 1.0);

}  // namespace citenet
