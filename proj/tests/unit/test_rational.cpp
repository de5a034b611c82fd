#include <gtest/gtest.h>

#include "tsmw/errors.hpp"
#include "tsmw/random.hpp"
#include "tsmw/rational.hpp"
#include "tsmw/report.hpp"

using namespace tsmw;

TEST(Rational, RendersLowestTerms) {
    EXPECT_EQ(to_string(Rational(34, 6)), "17/3");
    EXPECT_EQ(to_string(Rational(4, 2)), "2");
    EXPECT_EQ(to_string(Rational(-1, 8)), "-1/8");
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
    EXPECT_EQ(parse_rational("17/3"), Rational(17, 3));
    EXPECT_EQ(parse_rational(" -4 "), Rational(-4));
    EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
    EXPECT_EQ(parse_rational("-3e-2"), Rational(-3, 100));
    EXPECT_EQ(parse_rational("2.5E1"), Rational(25));
    EXPECT_THROW(parse_rational("1/0"), DomainError);
    EXPECT_THROW(parse_rational("abc"), DomainError);
    EXPECT_THROW(parse_rational(""), DomainError);
}

TEST(Report, FloatsRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Distribution, ParsesSpecs) {
    EXPECT_EQ(Distribution::parse("uniform(0,1)+0.3").describe(), "uniform(0,1)+0.3");
    EXPECT_EQ(Distribution::parse("normal(0, 2)").kind(), Distribution::Kind::Normal);
    EXPECT_EQ(Distribution::parse("exponential(1.5)-1").kind(), Distribution::Kind::Exponential);
    EXPECT_THROW(Distribution::parse("cauchy(0,1)"), DomainError);
    EXPECT_THROW(Distribution::parse("uniform(1,0)"), DomainError);
    EXPECT_THROW(Distribution::parse("uniform(0)"), DomainError);
}

TEST(Distribution, DrawsStayInSupport) {
    Rng rng(3);
    const auto u = Distribution::parse("uniform(2,3)");
    const auto e = Distribution::exponential(2.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u.draw(rng);
        EXPECT_GT(a, 2.0);
        EXPECT_LT(a, 3.0);
        EXPECT_GT(e.draw(rng), 0.0);
    }
}

TEST(Seeds, DerivedStreamsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}
