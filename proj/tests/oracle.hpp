#pragma once

// Brute-force reference implementations used to check the library. They are
// deliberately naive: dense tables, pair enumeration, and exact enumeration
// of every contingency table with the observed marginals.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Labels = std::vector<std::uint32_t>;

struct Dense {
    std::vector<std::vector<std::uint64_t>> n;
    std::vector<std::uint64_t> a, b;
    std::uint64_t total = 0;
};

inline Dense dense(const Labels& u, const Labels& v) {
    std::map<std::uint32_t, std::size_t> ru, cv;
    for (auto x : u) ru.emplace(x, ru.size());
    for (auto y : v) cv.emplace(y, cv.size());
    Dense d;
    d.n.assign(ru.size(), std::vector<std::uint64_t>(cv.size(), 0));
    d.a.assign(ru.size(), 0);
    d.b.assign(cv.size(), 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        ++d.n[ru[u[i]]][cv[v[i]]];
        ++d.a[ru[u[i]]];
        ++d.b[cv[v[i]]];
    }
    d.total = u.size();
    return d;
}

inline long double H(const std::vector<std::uint64_t>& sums, std::uint64_t total) {
    long double h = 0;
    for (auto s : sums)
        if (s) {
            const long double p = static_cast<long double>(s) / total;
            h -= p * std::log(p);
        }
    return h;
}

inline long double mi_table(const std::vector<std::vector<std::uint64_t>>& n, const std::vector<std::uint64_t>& a,
                            const std::vector<std::uint64_t>& b, std::uint64_t total) {
    long double mi = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (n[i][j]) {
                const long double pij = static_cast<long double>(n[i][j]) / total;
                mi += pij * std::log(pij / ((static_cast<long double>(a[i]) / total) *
                                            (static_cast<long double>(b[j]) / total)));
            }
    return mi;
}

inline std::uint64_t factorial(std::uint64_t k) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= k; ++i) f *= i;
    return f;
}

// Sum over every table with row sums a and column sums b of
// P(table) * MI(table), P = prod a! prod b! / (N! prod n_ij!).
inline long double emi_enumerate(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                 std::uint64_t total) {
    const std::size_t R = a.size(), C = b.size();
    std::vector<std::vector<std::uint64_t>> n(R, std::vector<std::uint64_t>(C, 0));
    long double numer = 1;
    for (auto x : a) numer *= factorial(x);
    for (auto y : b) numer *= factorial(y);
    numer /= factorial(total);
    long double emi = 0;
    std::vector<std::uint64_t> col_left = b;

    auto recurse = [&](auto&& self, std::size_t i, std::size_t j, std::uint64_t row_left) -> void {
        if (i == R) {
            long double denom = 1;
            for (auto& row : n)
                for (auto c : row) denom *= factorial(c);
            emi += numer / denom * mi_table(n, a, b, total);
            return;
        }
        if (j == C - 1) {
            if (row_left > col_left[j]) return;
            n[i][j] = row_left;
            col_left[j] -= row_left;
            if (i + 1 == R) {
                bool ok = true;
                for (auto c : col_left) ok = ok && c == 0;
                if (ok) self(self, i + 1, 0, 0);
            } else {
                self(self, i + 1, 0, a[i + 1]);
            }
            col_left[j] += row_left;
            n[i][j] = 0;
            return;
        }
        for (std::uint64_t x = 0; x <= std::min(row_left, col_left[j]); ++x) {
            n[i][j] = x;
            col_left[j] -= x;
            self(self, i, j + 1, row_left - x);
            col_left[j] += x;
        }
        n[i][j] = 0;
    };
    recurse(recurse, 0, 0, a[0]);
    return emi;
}

inline bool same_partition(const Labels& u, const Labels& v) {
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            if ((u[i] == u[j]) != (v[i] == v[j])) return false;
    return true;
}

inline double nmi(const Labels& u, const Labels& v) {
    const auto d = dense(u, v);
    if (d.a.size() == 1 && d.b.size() == 1) return 1.0;
    if (d.a.size() == 1 || d.b.size() == 1) return 0.0;
    const long double mi = mi_table(d.n, d.a, d.b, d.total);
    return static_cast<double>(mi / ((H(d.a, d.total) + H(d.b, d.total)) / 2));
}

inline double ami(const Labels& u, const Labels& v) {
    if (same_partition(u, v)) return 1.0;
    const auto d = dense(u, v);
    const long double mi = mi_table(d.n, d.a, d.b, d.total);
    const long double emi = emi_enumerate(d.a, d.b, d.total);
    const long double mean_h = (H(d.a, d.total) + H(d.b, d.total)) / 2;
    if (std::fabs(static_cast<double>(mean_h - emi)) < 1e-15) return 0.0;
    return static_cast<double>((mi - emi) / (mean_h - emi));
}

// Pair-counting form: a = together in both, d = apart in both.
inline double ari(const Labels& u, const Labels& v) {
    if (same_partition(u, v)) return 1.0;
    long double a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            const bool su = u[i] == u[j], sv = v[i] == v[j];
            if (su && sv) ++a;
            else if (su) ++b;
            else if (sv) ++c;
            else ++d;
        }
    const long double denom = (a + b) * (b + d) + (a + c) * (c + d);
    if (denom == 0) return 0.0;
    return static_cast<double>(2 * (a * d - b * c) / denom);
}

inline double v_measure(const Labels& u, const Labels& v, double beta = 1.0) {
    const auto d = dense(u, v);
    const long double hu = H(d.a, d.total), hv = H(d.b, d.total);
    long double hu_given_v = 0, hv_given_u = 0;
    for (std::size_t i = 0; i < d.a.size(); ++i)
        for (std::size_t j = 0; j < d.b.size(); ++j)
            if (d.n[i][j]) {
                const long double pij = static_cast<long double>(d.n[i][j]) / d.total;
                hu_given_v -= pij * std::log(static_cast<long double>(d.n[i][j]) / d.b[j]);
                hv_given_u -= pij * std::log(static_cast<long double>(d.n[i][j]) / d.a[i]);
            }
    const long double h = hu == 0 ? 1 : 1 - hu_given_v / hu;
    const long double c = hv == 0 ? 1 : 1 - hv_given_u / hv;
    if (h + c == 0) return 0.0;
    return static_cast<double>((1 + beta) * h * c / (beta * h + c));
}

// Two-level map equation for an unweighted undirected edge list, evaluated
// from scratch: L = q log q - 2 sum q_i log q_i - sum p log p
//                   + sum (q_i + p_i) log (q_i + p_i).
inline double codelength(std::size_t nodes, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                         const Labels& labels) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> simple;
    for (auto [x, y] : edges)
        if (x != y) simple.insert({std::min(x, y), std::max(x, y)});
    std::vector<double> deg(nodes, 0);
    std::map<std::uint32_t, double> exit, vol;
    for (auto [x, y] : simple) {
        deg[x] += 1;
        deg[y] += 1;
        if (labels[x] != labels[y]) {
            exit[labels[x]] += 1;
            exit[labels[y]] += 1;
        }
    }
    const double two_m = 2.0 * simple.size();
    for (std::size_t v = 0; v < nodes; ++v) vol[labels[v]] += deg[v];
    auto f = [](double x) { return x > 0 ? x * std::log2(x) : 0.0; };
    double q = 0, sum_q = 0, sum_p = 0, sum_qp = 0;
    for (auto& [m, e] : exit) {
        q += e / two_m;
        sum_q += f(e / two_m);
    }
    for (std::size_t v = 0; v < nodes; ++v) sum_p += f(deg[v] / two_m);
    for (auto& [m, w] : vol) sum_qp += f((exit.count(m) ? exit[m] : 0.0) / two_m + w / two_m);
    return f(q) - 2 * sum_q - sum_p + sum_qp;
}

}  // namespace oracle
