#include "tsmw/pi_model.hpp"

#include <algorithm>
#include <cmath>

#include "tsmw/errors.hpp"

namespace tsmw {

namespace {

constexpr std::array<int, kPiCount> kLabels = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13};

std::vector<PiPattern> build_patterns() {
    // Edges (x, y) over local indices. Shapes: stars around a treated vertex (P1, P2, P6),
    // stars around a control vertex (P9, P12, P13), the 3-edge path (P4), forks with a
    // degree-3 treated (P3) or control (P7) vertex, 5-vertex paths ending in controls (P5)
    // or treated (P10), and the 4-cycle (P8).
    return {
        {Pi::P0, 1, 1, {{0, 0}}},
        {Pi::P1, 2, 1, {{0, 0}, {1, 0}}},
        {Pi::P2, 3, 1, {{0, 0}, {1, 0}, {2, 0}}},
        {Pi::P3, 3, 2, {{0, 0}, {1, 0}, {2, 0}, {2, 1}}},
        {Pi::P4, 2, 2, {{0, 0}, {1, 0}, {1, 1}}},
        {Pi::P5, 3, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}}},
        {Pi::P6, 4, 1, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
        {Pi::P7, 2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}}},
        {Pi::P8, 2, 2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}},
        {Pi::P9, 1, 2, {{0, 0}, {0, 1}}},
        {Pi::P10, 2, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}}},
        {Pi::P12, 1, 3, {{0, 0}, {0, 1}, {0, 2}}},
        {Pi::P13, 1, 4, {{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
    };
}

Rational q(long p, long d) { return Rational(p, d); }

std::vector<NullIndicatorEntry> build_table() {
    // Index letters i, k, s, p denote controls and j, l, t, q denote treated.
    std::vector<NullIndicatorEntry> t = {
        {"ij", q(1, 2), q(1, 2)},
        {"ij kj", q(1, 3), q(1, 3)},
        {"ij il", q(1, 3), q(1, 3)},
        {"ij kl", q(1, 4), q(1, 4)},
        {"ij il it", q(1, 4), q(1, 4)},
        {"ij kj sj", q(1, 4), q(1, 4)},
        {"ij kj kl", q(5, 24), q(5, 24)},
        {"ij il kj", q(5, 24), q(5, 24)},
        {"ij kj sj st", q(3, 20), q(3, 20)},
        {"ij kj it st", q(2, 15), q(2, 15)},
        {"ij kj sj pj", q(1, 5), q(1, 5)},
        {"ij kj iq it", q(3, 20), q(3, 20)},
        {"ij kj il kt", q(2, 15), q(1, 6)},
        {"ij kj iq kl", q(2, 15), q(2, 15)},
        {"ij il iq st", q(1, 8), q(1, 8)},
        {"ij kj pj st", q(1, 8), q(1, 8)},
        {"ij il pq pt", q(1, 9), q(1, 9)},
        {"ij kj pq sq", q(1, 9), q(1, 9)},
        {"ij il pq sq", q(1, 9), q(1, 9)},
        {"ij kj il st", q(5, 48), q(1, 9)},
        {"ij kj pq st", q(1, 12), q(1, 12)},
        {"ij kl st sq", q(1, 12), q(1, 12)},
        {"ij kl st pq", q(1, 16), q(1, 16)},
        {"ij il it iq", q(1, 5), q(1, 5)},
        {"ij kj iq st", q(5, 48), q(5, 48)},
    };
    return t;
}

void check_no_ties(std::span<const double> sorted_xs, std::span<const double> sorted_ys) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < sorted_xs.size() && j < sorted_ys.size()) {
        if (sorted_xs[i] == sorted_ys[j]) throw TieError("tie between a control and a treated observation");
        if (sorted_xs[i] < sorted_ys[j]) {
            ++i;
        } else {
            ++j;
        }
    }
}

BigInt falling(Count n, int k) {
    BigInt out = 1;
    for (int i = 0; i < k; ++i) out *= BigInt(n - i);
    return out;
}

struct SideCounts {
    BigInt p0, p1, p2, p6, p3, p5, p4, p8;
};

// Counts ordered index selections satisfying the patterns anchored on the treated side.
// The mirrored patterns come from calling this on (-ys, -xs).
SideCounts side_counts(std::vector<double> xs, std::vector<double> ys) {
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const std::size_t b = ys.size();

    // below[j]: controls under the j-th smallest treated value; nondecreasing in j.
    std::vector<Count> below(b);
    for (std::size_t j = 0; j < b; ++j) {
        below[j] = std::lower_bound(xs.begin(), xs.end(), ys[j]) - xs.begin();
    }

    // Suffix sums over treated values of (below-1), (below-1)^2, (below-1)(below-2),
    // and (below-1) weighted by the number of larger treated values.
    std::vector<BigInt> s1(b + 1), s2(b + 1), sff(b + 1), sw(b + 1);
    SideCounts out;
    for (std::size_t r = b; r-- > 0;) {
        const Count e = below[r] - 1;
        const Count larger = static_cast<Count>(b - 1 - r);
        s1[r] = s1[r + 1] + e;
        s2[r] = s2[r + 1] + BigInt(e) * e;
        sff[r] = sff[r + 1] + BigInt(e) * (e - 1);
        sw[r] = sw[r + 1] + BigInt(e) * larger;

        const Count c = below[r];
        out.p0 += c;
        out.p1 += BigInt(c) * (c - 1);
        out.p2 += BigInt(c) * (c - 1) * (c - 2);
        out.p6 += BigInt(c) * (c - 1) * (c - 2) * (c - 3);
        out.p8 += 2 * BigInt(c) * (c - 1) * larger;
    }

    for (double x : xs) {
        const std::size_t first = std::upper_bound(ys.begin(), ys.end(), x) - ys.begin();
        const Count above = static_cast<Count>(b - first);
        if (above == 0) continue;
        out.p4 += BigInt(above - 1) * s1[first];
        out.p3 += BigInt(above - 1) * sff[first];
        out.p5 += s1[first] * s1[first] - s2[first] - 2 * sw[first];
    }
    return out;
}

}  // namespace

int pi_label(Pi id) { return kLabels[static_cast<std::size_t>(id)]; }

std::string pi_name(Pi id) { return "pi" + std::to_string(pi_label(id)); }

std::optional<Pi> pi_from_name(std::string_view name) {
    for (Pi id : kAllPis) {
        if (pi_name(id) == name) return id;
    }
    return std::nullopt;
}

Pi mirror(Pi id) {
    switch (id) {
        case Pi::P1: return Pi::P9;
        case Pi::P9: return Pi::P1;
        case Pi::P2: return Pi::P12;
        case Pi::P12: return Pi::P2;
        case Pi::P6: return Pi::P13;
        case Pi::P13: return Pi::P6;
        case Pi::P3: return Pi::P7;
        case Pi::P7: return Pi::P3;
        case Pi::P5: return Pi::P10;
        case Pi::P10: return Pi::P5;
        default: return id;
    }
}

const PiPattern& pi_pattern(Pi id) {
    static const std::vector<PiPattern> patterns = build_patterns();
    return patterns[static_cast<std::size_t>(id)];
}

PiVector<double> to_double(const PiVector<Rational>& pi) {
    PiVector<double> out;
    for (Pi id : kAllPis) out[id] = to_double(pi[id]);
    return out;
}

template <class T>
void check_pi_range(const PiVector<T>& pi) {
    for (Pi id : kAllPis) {
        const T& v = pi[id];
        if (!(v >= T(0) && v <= T(1))) throw DomainError(pi_name(id) + " outside [0, 1]");
    }
}

template void check_pi_range(const PiVector<Rational>&);
template void check_pi_range(const PiVector<double>&);

PiVector<Rational> null_pi_vector() {
    PiVector<Rational> p;
    p[Pi::P0] = q(1, 2);
    p[Pi::P1] = q(1, 3);
    p[Pi::P9] = q(1, 3);
    p[Pi::P2] = q(1, 4);
    p[Pi::P12] = q(1, 4);
    p[Pi::P4] = q(5, 24);
    p[Pi::P3] = q(3, 20);
    p[Pi::P7] = q(3, 20);
    p[Pi::P5] = q(2, 15);
    p[Pi::P10] = q(2, 15);
    p[Pi::P6] = q(1, 5);
    p[Pi::P13] = q(1, 5);
    p[Pi::P8] = q(1, 6);
    return p;
}

const std::vector<NullIndicatorEntry>& null_indicator_table() {
    static const std::vector<NullIndicatorEntry> table = build_table();
    return table;
}

std::optional<Rational> null_indicator_value(std::string_view pattern) {
    for (const auto& e : null_indicator_table()) {
        if (e.pattern == pattern) return e.value;
    }
    return std::nullopt;
}

PiEstimate pi_monte_carlo(const Distribution& controls, const Distribution& treated, std::uint64_t replications,
                          std::uint64_t seed, unsigned threads) {
    if (replications == 0) throw DomainError("replications must be positive");
    const std::size_t chunks = chunk_count(replications);
    std::vector<std::array<std::uint64_t, kPiCount>> tallies(chunks);

    for_each_chunk(chunks, threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::array<std::uint64_t, kPiCount> hits{};
        std::array<double, 4> x{};
        std::array<double, 4> y{};
        const std::uint64_t reps = chunk_length(replications, k);
        for (std::uint64_t r = 0; r < reps; ++r) {
            for (std::size_t p = 0; p < kPiCount; ++p) {
                const PiPattern& pat = pi_pattern(kAllPis[p]);
                for (int i = 0; i < pat.controls; ++i) x[i] = controls.draw(rng);
                for (int j = 0; j < pat.treated; ++j) y[j] = treated.draw(rng);
                for (int i = 0; i < pat.controls; ++i) {
                    for (int j = 0; j < pat.treated; ++j) {
                        if (x[i] == y[j]) throw TieError("sampler produced a tie; distributions must be continuous");
                    }
                }
                bool all = true;
                for (auto [i, j] : pat.edges) all = all && x[i] < y[j];
                hits[p] += all;
            }
        }
        tallies[k] = hits;
    });

    PiEstimate est;
    est.replications = replications;
    est.seed = seed;
    for (std::size_t p = 0; p < kPiCount; ++p) {
        std::uint64_t total = 0;
        for (const auto& t : tallies) total += t[p];
        const double mean = static_cast<double>(total) / static_cast<double>(replications);
        est.value.values[p] = mean;
        est.standard_error.values[p] = std::sqrt(mean * (1.0 - mean) / static_cast<double>(replications));
    }
    return est;
}

PiVector<Rational> pi_plugin_from_data(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() < 4 || ys.size() < 4) {
        throw InsufficientData("plug-in estimates need at least 4 observations in each group");
    }
    std::vector<double> sx(xs.begin(), xs.end());
    std::vector<double> sy(ys.begin(), ys.end());
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    check_no_ties(sx, sy);

    std::vector<double> mx(sy.size());
    std::vector<double> my(sx.size());
    std::transform(sy.begin(), sy.end(), mx.begin(), [](double v) { return -v; });
    std::transform(sx.begin(), sx.end(), my.begin(), [](double v) { return -v; });

    const SideCounts fwd = side_counts(sx, sy);
    const SideCounts rev = side_counts(mx, my);
    const Count a = static_cast<Count>(sx.size());
    const Count b = static_cast<Count>(sy.size());

    PiVector<Rational> p;
    p[Pi::P0] = Rational(fwd.p0, falling(a, 1) * falling(b, 1));
    p[Pi::P1] = Rational(fwd.p1, falling(a, 2) * b);
    p[Pi::P2] = Rational(fwd.p2, falling(a, 3) * b);
    p[Pi::P6] = Rational(fwd.p6, falling(a, 4) * b);
    p[Pi::P3] = Rational(fwd.p3, falling(a, 3) * falling(b, 2));
    p[Pi::P5] = Rational(fwd.p5, falling(a, 3) * falling(b, 2));
    p[Pi::P4] = Rational(fwd.p4, falling(a, 2) * falling(b, 2));
    p[Pi::P8] = Rational(fwd.p8, falling(a, 2) * falling(b, 2));
    p[Pi::P9] = Rational(rev.p1, falling(b, 2) * a);
    p[Pi::P12] = Rational(rev.p2, falling(b, 3) * a);
    p[Pi::P13] = Rational(rev.p6, falling(b, 4) * a);
    p[Pi::P7] = Rational(rev.p3, falling(b, 3) * falling(a, 2));
    p[Pi::P10] = Rational(rev.p5, falling(b, 3) * falling(a, 2));
    return p;
}

}  // namespace tsmw
