#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tsmw/design.hpp"
#include "tsmw/pi_model.hpp"
#include "tsmw/rational.hpp"

namespace tsmw {

enum class MomentMode { NullExact, General };

std::string to_string(MomentMode mode);

// Exponent pairs (a, b) of E(U1^a U2^b), ordered by total degree.
inline constexpr std::array<std::pair<int, int>, 14> kMomentOrders = {{
    {1, 0}, {0, 1},
    {2, 0}, {1, 1}, {0, 2},
    {3, 0}, {2, 1}, {1, 2}, {0, 3},
    {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4},
}};

std::size_t moment_index(int a, int b);

// Report key: "E_U1_2" for E(U1^2), "E_U1_1_U2_2" for E(U1 U2^2).
std::string moment_key(int a, int b);

template <class T>
struct MomentSet {
    MomentMode mode = MomentMode::General;
    std::array<T, 14> values{};

    T& operator()(int a, int b) { return values[moment_index(a, b)]; }
    const T& operator()(int a, int b) const { return values[moment_index(a, b)]; }

    friend bool operator==(const MomentSet&, const MomentSet&) = default;
};

MomentSet<double> to_double(const MomentSet<Rational>& set);

// One term of the fourth moment of a single statistic over an (m, n) sample:
// coefficient * ff(m, control_order) * ff(n, treated_order) * product of the pi factors.
struct QuarticTerm {
    std::int64_t coefficient;
    int control_order;
    int treated_order;
    std::vector<Pi> factors;
};

using QuarticTable = std::vector<QuarticTerm>;

const QuarticTable& quartic_terms();

// Lets validation runs substitute a modified coefficient table.
struct FormulaOverrides {
    const QuarticTable* quartic = nullptr;
};

// Falling factorial x (x-1) ... (x-k+1).
template <class T>
T falling(Count x, int k) {
    T out(1);
    for (int i = 0; i < k; ++i) out *= T(x - i);
    return out;
}

// ff(small, k) / ff(large, k), or 0 when the denominator vanishes.
template <class T>
T subsample_ratio(Count small, Count large, int k) {
    const T den = falling<T>(large, k);
    if (den == T(0)) return T(0);
    return T(falling<T>(small, k) / den);
}

// Closed forms for general alternatives, one evaluator per display.
namespace general {

template <class T> T single_first(Count m, Count n, const PiVector<T>& p);
template <class T> T single_second(Count m, Count n, const PiVector<T>& p);
template <class T> T single_third(Count m, Count n, const PiVector<T>& p);
template <class T> T single_fourth(Count m, Count n, const PiVector<T>& p, const QuarticTable& table = quartic_terms());

template <class T> T cross_11(const SampleDesign& d, const PiVector<T>& p);
template <class T> T cross_12(const SampleDesign& d, const PiVector<T>& p);
template <class T> T cross_21(const SampleDesign& d, const PiVector<T>& p);
template <class T> T cross_13(const SampleDesign& d, const PiVector<T>& p, const QuarticTable& table = quartic_terms());
template <class T> T cross_22(const SampleDesign& d, const PiVector<T>& p, const QuarticTable& table = quartic_terms());
template <class T> T cross_31(const SampleDesign& d, const PiVector<T>& p);

// Pooled-sample sums over an ordered pair of controls sharing a treated observation
// (first) or a treated pair sharing a control (second), times U2. Used by cross_21.
template <class T> T shared_treated_sum(Count M, Count N, const PiVector<T>& p);
template <class T> T shared_control_sum(Count M, Count N, const PiVector<T>& p);

}  // namespace general

// Closed-form polynomials for the null case.
namespace null {

Rational single_first(Count m, Count n);
Rational single_second(Count m, Count n);
Rational single_third(Count m, Count n);
Rational single_fourth(Count m, Count n);
Rational cross_11(const SampleDesign& d);
Rational cross_12(const SampleDesign& d);
Rational cross_21(const SampleDesign& d);
Rational cross_13(const SampleDesign& d);
Rational cross_22(const SampleDesign& d);
Rational cross_31(const SampleDesign& d);

// E(U2 | U1) = slope * U1 + intercept.
struct ConditionalMean {
    Rational slope;
    Rational intercept;
};
ConditionalMean conditional_mean(const SampleDesign& d);

// Null helper polynomials (need M >= 2, resp. N >= 2).
Rational helper_h(Count M, Count N);
Rational helper_g(Count M, Count N);

}  // namespace null

MomentSet<Rational> moments_null(const SampleDesign& design);

template <class T>
MomentSet<T> moments_general(const SampleDesign& design, const PiVector<T>& pi, const FormulaOverrides& overrides = {});

// E(sum over controls i != k and treated j of I_ij I_kj U2^2) on the pooled sample. Needs M >= 2.
template <class T>
T helper_h_expectation(const SampleDesign& design, const PiVector<T>& pi);

// Mirror of the above: treated j != l sharing control i. Needs N >= 2.
template <class T>
T helper_k_expectation(const SampleDesign& design, const PiVector<T>& pi);

}  // namespace tsmw
