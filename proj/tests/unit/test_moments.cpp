#include <gtest/gtest.h>

#include "tsmw/errors.hpp"
#include "tsmw/moments.hpp"
#include "tsmw/oracle.hpp"
#include "tsmw/validation.hpp"

using namespace tsmw;

namespace {

PiVector<Rational> some_pi() {
    // Plug-in estimates from a fixed dataset: a coherent set of pattern probabilities.
    const std::vector<double> xs = {0.1, 0.5, 0.35, 0.9, 0.62, 0.2};
    const std::vector<double> ys = {0.4, 0.8, 0.95, 0.3, 0.7};
    return pi_plugin_from_data(xs, ys);
}

}  // namespace

TEST(MomentsNull, Examples) {
    const auto unit = moments_null(SampleDesign::make(1, 1, 1, 1));
    for (const Rational& v : unit.values) EXPECT_EQ(v, Rational(1, 2));
    EXPECT_EQ(moments_null(SampleDesign::make(2, 2, 4, 4))(2, 0), Rational(17, 3));
    EXPECT_EQ(moments_null(SampleDesign::make(1, 1, 2, 2))(1, 1), Rational(17, 12));
    EXPECT_EQ(moments_null(SampleDesign::make(2, 3, 4, 5)).mode, MomentMode::NullExact);
}

TEST(MomentsNull, QuarticAtUnitSizes) { EXPECT_EQ(null::single_fourth(1, 1), Rational(1, 2)); }

TEST(MomentsGeneral, ReducesToNullOnGrid) {
    for (const SampleDesign& d : design_grid(10)) {
        EXPECT_EQ(moments_general(d, null_pi_vector()), [&] {
            auto m = moments_null(d);
            m.mode = MomentMode::General;
            return m;
        }()) << to_string(d);
    }
}

TEST(MomentsGeneral, DegenerateProbabilities) {
    const SampleDesign d = SampleDesign::make(2, 3, 4, 5);
    const auto ones = moments_general(d, PiVector<Rational>::filled(1));
    const auto zeros = moments_general(d, PiVector<Rational>::filled(0));
    for (auto [a, b] : kMomentOrders) {
        Rational expected = 1;
        for (int i = 0; i < a; ++i) expected *= 6;
        for (int i = 0; i < b; ++i) expected *= 20;
        EXPECT_EQ(ones(a, b), expected) << moment_key(a, b);
        EXPECT_EQ(zeros(a, b), 0) << moment_key(a, b);
    }
}

TEST(MomentsGeneral, RejectsOutOfRangeProbabilities) {
    auto p = to_double(null_pi_vector());
    p[Pi::P3] = -0.1;
    EXPECT_THROW(moments_general(SampleDesign::make(1, 1, 2, 2), p), DomainError);
    EXPECT_THROW(helper_h_expectation(SampleDesign::make(1, 1, 2, 2), p), DomainError);
}

TEST(MomentsGeneral, OrderingAndCauchySchwarz) {
    const auto p = some_pi();
    for (const SampleDesign& d : {SampleDesign::make(2, 2, 4, 4), SampleDesign::make(3, 2, 6, 5),
                                  SampleDesign::make(1, 4, 3, 7)}) {
        const auto m = moments_general(d, p);
        for (int k = 1; k <= 4; ++k) EXPECT_LE(m(k, 0), m(0, k));
        EXPECT_LE(m(1, 1) * m(1, 1), m(2, 0) * m(0, 2));
        for (const Rational& v : m.values) EXPECT_GE(v, 0);
    }
}

TEST(MomentsGeneral, DoubleMatchesRational) {
    const auto p = some_pi();
    const SampleDesign d = SampleDesign::make(3, 4, 7, 9);
    const auto exact = moments_general(d, p);
    const auto real = moments_general(d, to_double(p));
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
        EXPECT_NEAR(real.values[i], to_double(exact.values[i]), 1e-10 * to_double(exact.values[i]));
    }
}

TEST(MomentsGeneral, QuarticOverrideChangesResult) {
    QuarticTable table = quartic_terms();
    table[6].coefficient = 35;
    FormulaOverrides o{&table};
    const SampleDesign d = SampleDesign::make(2, 2, 3, 3);
    EXPECT_NE(moments_general(d, null_pi_vector(), o)(4, 0), moments_null(d)(4, 0));
}

TEST(Helpers, SmallDesignsMatchEnumeration) {
    const auto p = null_pi_vector();
    EXPECT_EQ(helper_h_expectation(SampleDesign::make(1, 1, 2, 1), p), Rational(8, 3));
    EXPECT_EQ(enumerate_helper_h(2, 1), Rational(8, 3));
    EXPECT_EQ(helper_h_expectation(SampleDesign::make(1, 1, 3, 2), p), enumerate_helper_h(3, 2));
    EXPECT_EQ(helper_k_expectation(SampleDesign::make(1, 1, 1, 2), p), enumerate_helper_k(1, 2));
    EXPECT_EQ(helper_k_expectation(SampleDesign::make(1, 1, 1, 2), p), Rational(8, 3));
}

TEST(Helpers, PreconditionsAndMirror) {
    const auto p = some_pi();
    EXPECT_THROW(helper_h_expectation(SampleDesign::make(1, 1, 1, 3), p), DomainError);
    EXPECT_THROW(helper_k_expectation(SampleDesign::make(1, 1, 3, 1), p), DomainError);
    const SampleDesign d = SampleDesign::make(1, 1, 4, 3);
    EXPECT_EQ(helper_k_expectation(d, p), helper_h_expectation(d.mirrored(), p.mirrored()));
}

TEST(Helpers, NullPolynomialsMatchGeneralForm) {
    const auto p = null_pi_vector();
    for (Count M = 1; M <= 7; ++M) {
        for (Count N = 1; N <= 7; ++N) {
            const SampleDesign d = SampleDesign::make(1, 1, M, N);
            if (M >= 2) EXPECT_EQ(null::helper_h(M, N), helper_h_expectation(d, p)) << M << "," << N;
            if (N >= 2) EXPECT_EQ(null::helper_g(M, N), helper_k_expectation(d, p)) << M << "," << N;
        }
    }
}

TEST(SubsampleRatio, ZeroDenominator) {
    EXPECT_EQ(subsample_ratio<Rational>(1, 1, 2), 0);
    EXPECT_EQ(subsample_ratio<Rational>(2, 4, 2), Rational(1, 6));
    EXPECT_EQ(falling<Rational>(5, 3), 60);
}

TEST(MomentKeys, Format) {
    EXPECT_EQ(moment_key(2, 0), "E_U1_2");
    EXPECT_EQ(moment_key(1, 2), "E_U1_1_U2_2");
    EXPECT_EQ(moment_key(0, 4), "E_U2_4");
    EXPECT_THROW(moment_index(5, 0), std::out_of_range);
}
