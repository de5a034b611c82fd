#include "tsmw/moments.hpp"

#include <stdexcept>

#include "tsmw/errors.hpp"

namespace tsmw {

std::string to_string(MomentMode mode) { return mode == MomentMode::NullExact ? "NullExact" : "General"; }

std::size_t moment_index(int a, int b) {
    for (std::size_t i = 0; i < kMomentOrders.size(); ++i) {
        if (kMomentOrders[i].first == a && kMomentOrders[i].second == b) return i;
    }
    throw std::out_of_range("no moment of order (" + std::to_string(a) + "," + std::to_string(b) + ")");
}

std::string moment_key(int a, int b) {
    std::string key = "E";
    if (a > 0) key += "_U1_" + std::to_string(a);
    if (b > 0) key += "_U2_" + std::to_string(b);
    return key;
}

MomentSet<double> to_double(const MomentSet<Rational>& set) {
    MomentSet<double> out;
    out.mode = set.mode;
    for (std::size_t i = 0; i < set.values.size(); ++i) out.values[i] = to_double(set.values[i]);
    return out;
}

const QuarticTable& quartic_terms() {
    using enum Pi;
    static const QuarticTable table = {
        {1, 1, 1, {P0}},
        {7, 2, 1, {P1}},
        {7, 1, 2, {P9}},
        {7, 2, 2, {P0, P0}},
        {6, 1, 3, {P12}},
        {6, 3, 1, {P2}},
        {36, 2, 2, {P4}},
        {6, 2, 2, {P8}},
        {18, 2, 3, {P0, P9}},
        {18, 3, 2, {P0, P1}},
        {12, 2, 3, {P7}},
        {12, 3, 2, {P3}},
        {12, 3, 2, {P5}},
        {12, 2, 3, {P10}},
        {1, 4, 1, {P6}},
        {1, 1, 4, {P13}},
        {4, 2, 4, {P0, P12}},
        {4, 4, 2, {P0, P2}},
        {3, 4, 2, {P1, P1}},
        {3, 2, 4, {P9, P9}},
        {6, 3, 3, {P1, P9}},
        {6, 3, 3, {P0, P0, P0}},
        {24, 3, 3, {P0, P4}},
        {6, 4, 3, {P0, P0, P1}},
        {6, 3, 4, {P0, P0, P9}},
        {1, 4, 4, {P0, P0, P0, P0}},
    };
    return table;
}

namespace general {

template <class T>
T single_first(Count m, Count n, const PiVector<T>& p) {
    return T(m) * T(n) * p[Pi::P0];
}

template <class T>
T single_second(Count m, Count n, const PiVector<T>& p) {
    const T p0 = p[Pi::P0];
    return T(m) * T(n) * p0 + falling<T>(m, 2) * T(n) * p[Pi::P1] + T(m) * falling<T>(n, 2) * p[Pi::P9] +
           falling<T>(m, 2) * falling<T>(n, 2) * p0 * p0;
}

template <class T>
T single_third(Count m, Count n, const PiVector<T>& p) {
    using enum Pi;
    const T p0 = p[P0];
    const T m1 = T(m), n1 = T(n);
    const T m2 = falling<T>(m, 2), n2 = falling<T>(n, 2);
    const T m3 = falling<T>(m, 3), n3 = falling<T>(n, 3);
    T s = m1 * n1 * p0;
    s += 3 * m2 * n1 * p[P1] + 3 * m1 * n2 * p[P9];
    s += 3 * m2 * n2 * p0 * p0 + 6 * m2 * n2 * p[P4];
    s += m3 * n1 * p[P2] + m1 * n3 * p[P12];
    s += 3 * m3 * n2 * p0 * p[P1] + 3 * m2 * n3 * p0 * p[P9];
    s += m3 * n3 * p0 * p0 * p0;
    return s;
}

template <class T>
T single_fourth(Count m, Count n, const PiVector<T>& p, const QuarticTable& table) {
    T s(0);
    for (const QuarticTerm& term : table) {
        T v = T(term.coefficient) * falling<T>(m, term.control_order) * falling<T>(n, term.treated_order);
        for (Pi f : term.factors) v *= p[f];
        s += v;
    }
    return s;
}

template <class T>
T cross_11(const SampleDesign& d, const PiVector<T>& p) {
    // Conditioning on U2: E(U1 | U2) = (mn / MN) U2 under within-group exchangeability.
    return subsample_ratio<T>(d.controls1, d.controls, 1) * subsample_ratio<T>(d.treated1, d.treated, 1) *
           single_second(d.controls, d.treated, p);
}

template <class T>
T cross_12(const SampleDesign& d, const PiVector<T>& p) {
    return subsample_ratio<T>(d.controls1, d.controls, 1) * subsample_ratio<T>(d.treated1, d.treated, 1) *
           single_third(d.controls, d.treated, p);
}

template <class T>
T cross_13(const SampleDesign& d, const PiVector<T>& p, const QuarticTable& table) {
    return subsample_ratio<T>(d.controls1, d.controls, 1) * subsample_ratio<T>(d.treated1, d.treated, 1) *
           single_fourth(d.controls, d.treated, p, table);
}

template <class T>
T shared_treated_sum(Count M, Count N, const PiVector<T>& p) {
    using enum Pi;
    const T M2 = falling<T>(M, 2), M3 = falling<T>(M, 3);
    const T N1 = T(N), N2 = falling<T>(N, 2);
    return p[P0] * p[P1] * M3 * N2 + 2 * p[P4] * M2 * N2 + p[P2] * M3 * N1 + 2 * p[P1] * M2 * N1;
}

template <class T>
T shared_control_sum(Count M, Count N, const PiVector<T>& p) {
    using enum Pi;
    const T M1 = T(M), M2 = falling<T>(M, 2);
    const T N2 = falling<T>(N, 2), N3 = falling<T>(N, 3);
    return p[P0] * p[P9] * M2 * N3 + 2 * p[P4] * M2 * N2 + p[P12] * M1 * N3 + 2 * p[P9] * M1 * N2;
}

namespace {

// Weights for expanding U1^2 given the pooled indicators: the share of ordered index
// pairs that land in the stage-1 sample, split by how many indices they share.
template <class T>
struct PairWeights {
    T both_distinct;   // distinct controls and distinct treated
    T same_pair;       // identical (control, treated) pair
    T same_treated;    // distinct controls, shared treated
    T same_control;    // shared control, distinct treated
};

template <class T>
PairWeights<T> pair_weights(const SampleDesign& d) {
    const T r4 = subsample_ratio<T>(d.controls1, d.controls, 2) * subsample_ratio<T>(d.treated1, d.treated, 2);
    const T r1 = subsample_ratio<T>(d.controls1, d.controls, 1) * subsample_ratio<T>(d.treated1, d.treated, 1);
    const T ra = subsample_ratio<T>(d.controls1, d.controls, 2) * subsample_ratio<T>(d.treated1, d.treated, 1);
    const T rb = subsample_ratio<T>(d.controls1, d.controls, 1) * subsample_ratio<T>(d.treated1, d.treated, 2);
    return {r4, T(r1 - r4), T(ra - r4), T(rb - r4)};
}

}  // namespace

template <class T>
T cross_21(const SampleDesign& d, const PiVector<T>& p) {
    const auto w = pair_weights<T>(d);
    const Count M = d.controls, N = d.treated;
    return w.both_distinct * single_third(M, N, p) + w.same_pair * single_second(M, N, p) +
           w.same_treated * shared_treated_sum(M, N, p) + w.same_control * shared_control_sum(M, N, p);
}

template <class T>
T cross_22(const SampleDesign& d, const PiVector<T>& p, const QuarticTable& table) {
    const auto w = pair_weights<T>(d);
    const Count M = d.controls, N = d.treated;
    T s = w.both_distinct * single_fourth(M, N, p, table) + w.same_pair * single_third(M, N, p);
    if (M >= 2) s += w.same_treated * helper_h_expectation(d, p);
    if (N >= 2) s += w.same_control * helper_k_expectation(d, p);
    return s;
}

template <class T>
T cross_31(const SampleDesign& d, const PiVector<T>& p) {
    using enum Pi;
    const Count m = d.controls1, n = d.treated1;
    const T M = T(d.controls), N = T(d.treated);
    const T p0 = p[P0], p1 = p[P1], p2 = p[P2], p3 = p[P3], p4 = p[P4], p5 = p[P5], p6 = p[P6];
    const T p7 = p[P7], p8 = p[P8], p9 = p[P9], p10 = p[P10], p12 = p[P12], p13 = p[P13];

    T s(0);
    s += falling<T>(m, 3) * falling<T>(n, 3) *
         ((M - 3) * (N - 3) * p0 * p0 * p0 * p0 + 3 * (N - 3) * p0 * p0 * p9 + 3 * (M - 3) * p0 * p0 * p1 +
          3 * p0 * p0 * p0 + 6 * p0 * p4);
    s += 3 * falling<T>(m, 2) * falling<T>(n, 3) *
         ((M - 2) * (N - 3) * p0 * p0 * p9 + (N - 3) * p0 * p12 + (N - 3) * p9 * p9 + (M - 2) * p9 * p1 +
          2 * (M - 2) * p4 * p0 + 3 * p9 * p0 + p7 + 2 * p10);
    s += 3 * falling<T>(m, 3) * falling<T>(n, 2) *
         ((M - 3) * (N - 2) * p0 * p0 * p1 + (M - 3) * p0 * p2 + (M - 3) * p1 * p1 + (N - 2) * p9 * p1 +
          2 * (N - 2) * p4 * p0 + 3 * p1 * p0 + p3 + 2 * p5);
    s += T(m) * falling<T>(n, 3) * ((M - 1) * (N - 3) * p0 * p12 + (N - 3) * p13 + 3 * (M - 1) * p7 + 3 * p12);
    s += falling<T>(m, 3) * T(n) * ((N - 1) * (M - 3) * p0 * p2 + (M - 3) * p6 + 3 * (N - 1) * p3 + 3 * p2);
    s += 6 * falling<T>(m, 2) * falling<T>(n, 2) *
         ((M - 2) * (N - 2) * p0 * p4 + (N - 2) * (p7 + p10) + (M - 2) * (p3 + p5) + 3 * p4 + p8);
    s += 3 * falling<T>(m, 2) * falling<T>(n, 2) *
         ((M - 2) * (N - 2) * p0 * p0 * p0 + 2 * (N - 2) * p0 * p9 + 2 * (M - 2) * p0 * p1 + 2 * p0 * p0 + 2 * p4);
    s += 3 * falling<T>(m, 2) * T(n) * ((M - 2) * (N - 1) * p0 * p1 + 2 * (N - 1) * p4 + (M - 2) * p2 + 2 * p1);
    s += 3 * T(m) * falling<T>(n, 2) * ((N - 2) * (M - 1) * p0 * p9 + 2 * (M - 1) * p4 + (N - 2) * p12 + 2 * p9);
    s += T(m) * T(n) / (M * N) * single_second(d.controls, d.treated, p);
    return s;
}

}  // namespace general

template <class T>
T helper_h_expectation(const SampleDesign& design, const PiVector<T>& pi) {
    using enum Pi;
    check_pi_range(pi);
    if (design.controls < 2) throw DomainError("helper H needs at least two controls");
    const T M = T(design.controls), N = T(design.treated);
    const T p0 = pi[P0], p1 = pi[P1], p2 = pi[P2], p3 = pi[P3], p4 = pi[P4], p5 = pi[P5];
    const T p6 = pi[P6], p7 = pi[P7], p8 = pi[P8], p9 = pi[P9], p10 = pi[P10];

    T s(0);
    s += p1 * (M - 2) * (N - 1) * (p0 + (M - 3) * p1 + (N - 2) * p9 + (M - 3) * (N - 2) * p0 * p0);
    s += 2 * (M - 2) * (M - 3) * (N - 1) * p2 * p0 + 2 * (M - 2) * (N - 1) * p3;
    s += 4 * (N - 1) * (M - 2) * (N - 2) * p4 * p0 + 4 * (N - 1) * (M - 2) * p5;
    s += 4 * (M - 2) * (N - 1) * p1 * p0 + (M - 2) * p2;
    s += (M - 2) * (M - 3) * p6 + 2 * (N - 1) * p4 + 2 * (N - 1) * p8;
    s += 2 * (N - 1) * (N - 2) * p7 + 2 * (N - 1) * (N - 2) * p10;
    s += 4 * p1 + 4 * (M - 2) * p2 + 8 * (N - 1) * p4 + 4 * (M - 2) * (N - 1) * p3;
    return M * (M - 1) * N * s;
}

template <class T>
T helper_k_expectation(const SampleDesign& design, const PiVector<T>& pi) {
    check_pi_range(pi);
    if (design.treated < 2) throw DomainError("helper K needs at least two treated observations");
    return helper_h_expectation(design.mirrored(), pi.mirrored());
}

template <class T>
MomentSet<T> moments_general(const SampleDesign& design, const PiVector<T>& pi, const FormulaOverrides& overrides) {
    check_pi_range(pi);
    const QuarticTable& table = overrides.quartic ? *overrides.quartic : quartic_terms();
    const Count m = design.controls1, n = design.treated1, M = design.controls, N = design.treated;

    MomentSet<T> out;
    out.mode = MomentMode::General;
    out(1, 0) = general::single_first(m, n, pi);
    out(0, 1) = general::single_first(M, N, pi);
    out(2, 0) = general::single_second(m, n, pi);
    out(1, 1) = general::cross_11(design, pi);
    out(0, 2) = general::single_second(M, N, pi);
    out(3, 0) = general::single_third(m, n, pi);
    out(2, 1) = general::cross_21(design, pi);
    out(1, 2) = general::cross_12(design, pi);
    out(0, 3) = general::single_third(M, N, pi);
    out(4, 0) = general::single_fourth(m, n, pi, table);
    out(3, 1) = general::cross_31(design, pi);
    out(2, 2) = general::cross_22(design, pi, table);
    out(1, 3) = general::cross_13(design, pi, table);
    out(0, 4) = general::single_fourth(M, N, pi, table);
    return out;
}

#define TSMW_INSTANTIATE(T)                                                                         \
    template T general::single_first(Count, Count, const PiVector<T>&);                            \
    template T general::single_second(Count, Count, const PiVector<T>&);                           \
    template T general::single_third(Count, Count, const PiVector<T>&);                            \
    template T general::single_fourth(Count, Count, const PiVector<T>&, const QuarticTable&);      \
    template T general::cross_11(const SampleDesign&, const PiVector<T>&);                         \
    template T general::cross_12(const SampleDesign&, const PiVector<T>&);                         \
    template T general::cross_21(const SampleDesign&, const PiVector<T>&);                         \
    template T general::cross_13(const SampleDesign&, const PiVector<T>&, const QuarticTable&);    \
    template T general::cross_22(const SampleDesign&, const PiVector<T>&, const QuarticTable&);    \
    template T general::cross_31(const SampleDesign&, const PiVector<T>&);                         \
    template T general::shared_treated_sum(Count, Count, const PiVector<T>&);                      \
    template T general::shared_control_sum(Count, Count, const PiVector<T>&);                      \
    template T helper_h_expectation(const SampleDesign&, const PiVector<T>&);                      \
    template T helper_k_expectation(const SampleDesign&, const PiVector<T>&);                      \
    template MomentSet<T> moments_general(const SampleDesign&, const PiVector<T>&, const FormulaOverrides&);

TSMW_INSTANTIATE(Rational)
TSMW_INSTANTIATE(double)

#undef TSMW_INSTANTIATE

namespace null {

namespace {

Rational R(Count v) { return Rational(v); }
Rational F(long p, long q) { return Rational(p, q); }

Rational quartic(Count mi, Count ni) {
    const Rational m = R(mi), n = R(ni);
    const Rational m2 = m * m, m3 = m2 * m, m4 = m3 * m;
    const Rational n2 = n * n, n3 = n2 * n, n4 = n3 * n;
    return m4 * n4 / 16 + m4 * n3 / 8 + m4 * n2 / 48 - m4 * n / 120 + m3 * n4 / 8 + m3 * n3 / 6 + m3 * n2 / 40 -
           m3 * n / 60 + m2 * n4 / 48 + m2 * n3 / 40 - m2 * n2 / 240 - m2 * n / 120 - m * n4 / 120 - m * n3 / 60 -
           m * n2 / 120;
}

}  // namespace

Rational single_first(Count m, Count n) { return R(m) * R(n) / 2; }

Rational single_second(Count mi, Count ni) {
    const Rational m = R(mi), n = R(ni);
    return m * m * n * n / 4 + m * m * n / 12 + m * n * n / 12 + m * n / 12;
}

Rational single_third(Count mi, Count ni) {
    const Rational m = R(mi), n = R(ni);
    return (m * m * m * n * n * n + m * m * m * n * n + m * m * n * n * n + m * m * n * n) / 8;
}

Rational single_fourth(Count m, Count n) { return quartic(m, n); }

Rational cross_11(const SampleDesign& d) {
    const Rational mn = R(d.controls1) * R(d.treated1);
    const Rational M = R(d.controls), N = R(d.treated);
    return mn * M * N / 4 + mn * M / 12 + mn * N / 12 + mn / 12;
}

Rational cross_12(const SampleDesign& d) {
    const Rational mn = R(d.controls1) * R(d.treated1);
    const Rational M = R(d.controls), N = R(d.treated);
    return mn * (M * M * N * N + M * M * N + M * N * N + M * N) / 8;
}

ConditionalMean conditional_mean(const SampleDesign& d) {
    const Rational m = R(d.controls1), n = R(d.treated1), M = R(d.controls), N = R(d.treated);
    const Rational slope = (M + N + 1) / (m + n + 1);
    const Rational c = ((M - m) * n * (n + 1) + (N - n) * m * (m + 1)) / (m + n + 1);
    return {slope, (c + (M - m) * (N - n)) / 2};
}

Rational cross_21(const SampleDesign& d) {
    const auto cm = conditional_mean(d);
    return cm.slope * single_third(d.controls1, d.treated1) + cm.intercept * single_second(d.controls1, d.treated1);
}

Rational cross_31(const SampleDesign& d) {
    const auto cm = conditional_mean(d);
    return cm.slope * single_fourth(d.controls1, d.treated1) + cm.intercept * single_third(d.controls1, d.treated1);
}

Rational cross_13(const SampleDesign& d) {
    return R(d.controls1) * R(d.treated1) / (R(d.controls) * R(d.treated)) * single_fourth(d.controls, d.treated);
}

Rational helper_h(Count Mi, Count Ni) {
    if (Mi < 2) throw DomainError("helper H needs at least two controls");
    const Rational M = R(Mi), N = R(Ni);
    const Rational inner = 5 * M / 4 + 29 * N / 12 + 3 * (2 * M - 4) * (N - 1) / 20 + 2 * (4 * N - 4) * (M - 2) / 15 +
                           19 * (4 * M - 8) * (N - 1) / 60 + 17 * (2 * N - 2) * (N - 2) / 60 + (M - 2) * (M - 3) / 5 +
                           (M / 3 - F(2, 3)) * (N - 1) * (M / 3 + N / 3 + (M - 3) * (N - 2) / 4 - F(7, 6)) +
                           (2 * M - 4) * (M - 3) * (N - 1) / 8 + 5 * (4 * N - 4) * (M - 2) * (N - 2) / 48 - F(43, 12);
    return M * N * (M - 1) * inner;
}

Rational helper_g(Count M, Count N) {
    if (N < 2) throw DomainError("helper G needs at least two treated observations");
    return helper_h(N, M);
}

Rational cross_22(const SampleDesign& d) {
    const Count M = d.controls, N = d.treated;
    const Rational r4 = subsample_ratio<Rational>(d.controls1, M, 2) * subsample_ratio<Rational>(d.treated1, N, 2);
    const Rational r1 = subsample_ratio<Rational>(d.controls1, M, 1) * subsample_ratio<Rational>(d.treated1, N, 1);
    const Rational ra = subsample_ratio<Rational>(d.controls1, M, 2) * subsample_ratio<Rational>(d.treated1, N, 1);
    const Rational rb = subsample_ratio<Rational>(d.controls1, M, 1) * subsample_ratio<Rational>(d.treated1, N, 2);
    Rational s = (r1 - r4) * single_third(M, N) + r4 * single_fourth(M, N);
    if (M >= 2) s += (ra - r4) * helper_h(M, N);
    if (N >= 2) s += (rb - r4) * helper_g(M, N);
    return s;
}

}  // namespace null

MomentSet<Rational> moments_null(const SampleDesign& d) {
    const Count m = d.controls1, n = d.treated1, M = d.controls, N = d.treated;
    MomentSet<Rational> out;
    out.mode = MomentMode::NullExact;
    out(1, 0) = null::single_first(m, n);
    out(0, 1) = null::single_first(M, N);
    out(2, 0) = null::single_second(m, n);
    out(1, 1) = null::cross_11(d);
    out(0, 2) = null::single_second(M, N);
    out(3, 0) = null::single_third(m, n);
    out(2, 1) = null::cross_21(d);
    out(1, 2) = null::cross_12(d);
    out(0, 3) = null::single_third(M, N);
    out(4, 0) = null::single_fourth(m, n);
    out(3, 1) = null::cross_31(d);
    out(2, 2) = null::cross_22(d);
    out(1, 3) = null::cross_13(d);
    out(0, 4) = null::single_fourth(M, N);
    return out;
}

}  // namespace tsmw
