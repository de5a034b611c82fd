#pragma once

// Test-only exact oracle for the general closed forms. E(U1^a U2^b) expands into a sum
// over tuples of (control, treated) index pairs; each tuple's expectation depends only on
// the shape of the graph its distinct pairs form, and disjoint components are independent.
// Summing shape probabilities over all tuples gives the moment at any pi point.

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsmw/design.hpp"
#include "tsmw/pi_model.hpp"
#include "tsmw/rational.hpp"

namespace census {

using Edge = std::pair<int, int>;  // (control index, treated index)
using Edges = std::vector<Edge>;

inline std::vector<Edges> components(Edges edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // Vertices: controls as 2i, treated as 2j+1.
    std::map<int, int> parent;
    auto find = [&](int v) {
        if (!parent.count(v)) parent[v] = v;
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto [x, y] : edges) {
        const int a = find(2 * x), b = find(2 * y + 1);
        if (a != b) parent[a] = b;
    }
    std::map<int, Edges> groups;
    for (const Edge& e : edges) groups[find(2 * e.first)].push_back(e);
    std::vector<Edges> out;
    for (auto& [root, g] : groups) out.push_back(std::move(g));
    return out;
}

inline tsmw::Pi shape(const Edges& component) {
    using tsmw::Pi;
    std::map<int, int> deg_x, deg_y;
    for (auto [x, y] : component) {
        ++deg_x[x];
        ++deg_y[y];
    }
    const std::size_t e = component.size(), nx = deg_x.size(), ny = deg_y.size();
    auto max_deg = [](const std::map<int, int>& d) {
        int m = 0;
        for (auto [k, v] : d) m = std::max(m, v);
        return m;
    };
    if (e == 1) return Pi::P0;
    if (e == 2) return ny == 1 ? Pi::P1 : Pi::P9;
    if (e == 3) return ny == 1 ? Pi::P2 : nx == 1 ? Pi::P12 : Pi::P4;
    if (e == 4) {
        if (nx == 2 && ny == 2) return Pi::P8;
        if (ny == 1) return Pi::P6;
        if (nx == 1) return Pi::P13;
        if (nx == 3) return max_deg(deg_y) == 3 ? Pi::P3 : Pi::P5;
        if (nx == 2) return max_deg(deg_x) == 3 ? Pi::P7 : Pi::P10;
    }
    throw std::logic_error("component with more than four edges");
}

template <class T>
T monomial(const Edges& edges, const tsmw::PiVector<T>& pi) {
    T v(1);
    for (const Edges& c : components(edges)) v *= pi[shape(c)];
    return v;
}

// Sum over all ways of picking `slots.size()` pairs, slot k ranging over a rectangle of
// controls x treated, of the tuple's expectation times `weight(tuple)`.
template <class T, class Weight>
T tuple_sum(const std::vector<Edge>& slots, const tsmw::PiVector<T>& pi, Weight weight) {
    Edges current;
    T total(0);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == slots.size()) {
            const long w = weight(current);
            if (w != 0) total += T(w) * monomial(current, pi);
            return;
        }
        for (int x = 0; x < slots[k].first; ++x) {
            for (int y = 0; y < slots[k].second; ++y) {
                current.emplace_back(x, y);
                self(self, k + 1);
                current.pop_back();
            }
        }
    };
    rec(rec, 0);
    return total;
}

template <class T>
T joint_moment(const tsmw::SampleDesign& d, int a, int b, const tsmw::PiVector<T>& pi) {
    std::vector<Edge> slots;
    for (int k = 0; k < a; ++k) slots.emplace_back(d.controls1, d.treated1);
    for (int k = 0; k < b; ++k) slots.emplace_back(d.controls, d.treated);
    return tuple_sum(slots, pi, [](const Edges&) { return 1L; });
}

// E(sum over controls i != k, treated j of I_ij I_kj U2^2).
template <class T>
T helper_h(tsmw::Count M, tsmw::Count N, const tsmw::PiVector<T>& pi) {
    std::vector<Edge> slots = {{M, N}, {M, N}, {M, N}, {M, N}};
    // Slots 0 and 1 carry the pair sharing a treated index with distinct controls.
    return tuple_sum(slots, pi, [](const Edges& e) {
        return e[0].second == e[1].second && e[0].first != e[1].first ? 1L : 0L;
    });
}

template <class T>
T helper_k(tsmw::Count M, tsmw::Count N, const tsmw::PiVector<T>& pi) {
    std::vector<Edge> slots = {{M, N}, {M, N}, {M, N}, {M, N}};
    return tuple_sum(slots, pi, [](const Edges& e) {
        return e[0].first == e[1].first && e[0].second != e[1].second ? 1L : 0L;
    });
}

// Null probability that every pair in `edges` is ordered control < treated, by checking
// all orderings of the distinct observations involved.
inline tsmw::Rational null_probability(const Edges& edges) {
    std::vector<int> xs, ys;
    for (auto [x, y] : edges) {
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
        if (std::find(ys.begin(), ys.end(), y) == ys.end()) ys.push_back(y);
    }
    const int k = static_cast<int>(xs.size() + ys.size());
    std::vector<int> rank(k);
    std::iota(rank.begin(), rank.end(), 0);
    long good = 0, total = 0;
    do {
        ++total;
        bool ok = true;
        for (auto [x, y] : edges) {
            const int rx = rank[std::find(xs.begin(), xs.end(), x) - xs.begin()];
            const int ry = rank[xs.size() + (std::find(ys.begin(), ys.end(), y) - ys.begin())];
            ok = ok && rx < ry;
        }
        good += ok;
    } while (std::next_permutation(rank.begin(), rank.end()));
    return tsmw::Rational(good, total);
}

}  // namespace census
