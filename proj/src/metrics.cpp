#include "citenet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "citenet/error.hpp"

namespace citenet {

namespace {

std::vector<std::uint32_t> first_appearance(std::span<const std::uint32_t> labels, std::uint32_t& count) {
    std::unordered_map<std::uint32_t, std::uint32_t> index;
    std::vector<std::uint32_t> dense(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        dense[i] = index.emplace(labels[i], static_cast<std::uint32_t>(index.size())).first->second;
    count = static_cast<std::uint32_t>(index.size());
    return dense;
}

double entropy(const std::vector<std::uint64_t>& sums, std::uint64_t total) {
    if (total == 0) return 0.0;
    const double n = static_cast<double>(total);
    double h = 0;
    for (auto s : sums)
        if (s > 0) {
            const double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
    return h;
}

double pairs(double x) { return x * (x - 1) / 2; }

}  // namespace

ContingencyTable::ContingencyTable(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v) {
    if (u.size() != v.size()) throw std::invalid_argument("label vectors differ in length");
    if (u.empty()) throw std::invalid_argument("contingency table needs at least one item");
    std::uint32_t row_count = 0;
    std::uint32_t col_count = 0;
    const auto rows = first_appearance(u, row_count);
    const auto cols = first_appearance(v, col_count);
    rows_.assign(row_count, 0);
    cols_.assign(col_count, 0);

    std::vector<std::uint64_t> keys(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        keys[i] = (static_cast<std::uint64_t>(rows[i]) << 32) | cols[i];
        ++rows_[rows[i]];
        ++cols_[cols[i]];
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        cells_.push_back({static_cast<std::uint32_t>(keys[i] >> 32), static_cast<std::uint32_t>(keys[i]),
                          static_cast<std::uint64_t>(j - i)});
        i = j;
    }
    total_ = u.size();
}

bool ContingencyTable::is_identity() const {
    return cells_.size() == rows_.size() && cells_.size() == cols_.size();
}

double entropy_rows(const ContingencyTable& t) { return entropy(t.row_sums(), t.total()); }
double entropy_cols(const ContingencyTable& t) { return entropy(t.col_sums(), t.total()); }

double mutual_information(const ContingencyTable& t) {
    if (t.row_sums().size() == 1 || t.col_sums().size() == 1) return 0.0;
    const double n = static_cast<double>(t.total());
    double mi = 0;
    for (const auto& c : t.cells()) {
        const double nij = static_cast<double>(c.count);
        const double a = static_cast<double>(t.row_sums()[c.row]);
        const double b = static_cast<double>(t.col_sums()[c.col]);
        mi += (nij / n) * (std::log(nij) + std::log(n) - std::log(a) - std::log(b));
    }
    return std::max(0.0, mi);
}

double expected_mutual_information(const ContingencyTable& t) {
    const auto total = t.total();
    const double n = static_cast<double>(total);
    std::vector<double> log_fact(total + 1, 0.0);
    for (std::uint64_t k = 2; k <= total; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));

    std::map<std::uint64_t, std::uint64_t> row_groups;
    std::map<std::uint64_t, std::uint64_t> col_groups;
    for (auto a : t.row_sums()) ++row_groups[a];
    for (auto b : t.col_sums()) ++col_groups[b];

    const double log_n = std::log(n);
    double emi = 0;
    for (const auto& [a, row_mult] : row_groups) {
        for (const auto& [b, col_mult] : col_groups) {
            const std::uint64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(a + b) - static_cast<std::int64_t>(total));
            const std::uint64_t hi = std::min(a, b);
            const double log_a = std::log(static_cast<double>(a));
            const double log_b = std::log(static_cast<double>(b));
            const double fixed = log_fact[a] + log_fact[b] + log_fact[total - a] + log_fact[total - b] - log_fact[total];
            double sum = 0;
            for (std::uint64_t k = lo; k <= hi; ++k) {
                const double kk = static_cast<double>(k);
                const double log_p =
                    fixed - log_fact[k] - log_fact[a - k] - log_fact[b - k] - log_fact[total - a - b + k];
                sum += (kk / n) * (log_n + std::log(kk) - log_a - log_b) * std::exp(log_p);
            }
            emi += static_cast<double>(row_mult * col_mult) * sum;
        }
    }
    return emi;
}

double nmi(const ContingencyTable& t) {
    const bool single_rows = t.row_sums().size() == 1;
    const bool single_cols = t.col_sums().size() == 1;
    if (single_rows && single_cols) return 1.0;
    if (single_rows || single_cols) return 0.0;
    if (t.is_identity()) return 1.0;
    const double mi = mutual_information(t);
    const double norm = (entropy_rows(t) + entropy_cols(t)) / 2;
    return std::clamp(mi / norm, 0.0, 1.0);
}

double ami(const ContingencyTable& t) {
    if (t.is_identity()) return 1.0;
    if (t.row_sums().size() == 1 || t.col_sums().size() == 1) return 0.0;
    const double mi = mutual_information(t);
    const double emi = expected_mutual_information(t);
    const double norm = (entropy_rows(t) + entropy_cols(t)) / 2;
    const double denominator = norm - emi;
    if (std::abs(denominator) < 1e-15) return 0.0;
    return (mi - emi) / denominator;
}

double ari(const ContingencyTable& t) {
    if (t.is_identity()) return 1.0;
    double index = 0;
    for (const auto& c : t.cells()) index += pairs(static_cast<double>(c.count));
    double sum_a = 0;
    double sum_b = 0;
    for (auto a : t.row_sums()) sum_a += pairs(static_cast<double>(a));
    for (auto b : t.col_sums()) sum_b += pairs(static_cast<double>(b));
    const double expected = sum_a * sum_b / pairs(static_cast<double>(t.total()));
    const double max_index = (sum_a + sum_b) / 2;
    if (std::abs(max_index - expected) <= 1e-12 * std::max(1.0, max_index)) return 0.0;
    return (index - expected) / (max_index - expected);
}

double v_measure(const ContingencyTable& t, double beta) {
    if (!(beta > 0)) throw std::invalid_argument("V-measure beta must be positive");
    if (t.is_identity()) return 1.0;
    const double hu = entropy_rows(t);
    const double hv = entropy_cols(t);
    const double mi = mutual_information(t);
    // 1 - H(U|V)/H(U) with H(U|V) = H(U) - MI.
    const double homogeneity = hu == 0 ? 1.0 : mi / hu;
    const double completeness = hv == 0 ? 1.0 : mi / hv;
    if (homogeneity + completeness == 0) return 0.0;
    return (1 + beta) * homogeneity * completeness / (beta * homogeneity + completeness);
}

MetricReport compare(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v, double beta) {
    const ContingencyTable t(u, v);
    MetricReport r;
    r.nmi = nmi(t);
    r.ami = ami(t);
    r.ari = ari(t);
    r.vme = v_measure(t, beta);
    r.beta = beta;
    r.shared_n = u.size();
    return r;
}

AlignedLabels restrict_to_shared(std::span<const std::string> ids_a, std::span<const std::uint32_t> labels_a,
                                 std::span<const std::string> ids_b, std::span<const std::uint32_t> labels_b) {
    if (ids_a.size() != labels_a.size() || ids_b.size() != labels_b.size())
        throw InvalidPartition("partition size does not match its node list");
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(ids_b.size());
    for (std::size_t i = 0; i < ids_b.size(); ++i) index.emplace(ids_b[i], i);
    AlignedLabels out;
    for (std::size_t i = 0; i < ids_a.size(); ++i) {
        auto it = index.find(ids_a[i]);
        if (it == index.end()) continue;
        out.first.push_back(labels_a[i]);
        out.second.push_back(labels_b[it->second]);
        out.ids.push_back(ids_a[i]);
    }
    if (out.ids.empty()) throw EmptyIntersection("partitions share no nodes");
    return out;
}

MetricReport compare_shared(std::span<const std::string> ids_a, std::span<const std::uint32_t> labels_a,
                            std::span<const std::string> ids_b, std::span<const std::uint32_t> labels_b,
                            double beta) {
    const auto aligned = restrict_to_shared(ids_a, labels_a, ids_b, labels_b);
    return compare(aligned.first, aligned.second, beta);
}

}  // namespace citenet
