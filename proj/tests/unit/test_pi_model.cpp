#include <gtest/gtest.h>

#include <cmath>

#include "support/census_oracle.hpp"
#include "tsmw/errors.hpp"
#include "tsmw/pi_model.hpp"

using namespace tsmw;

namespace {

// "ij kl" -> edges, controls lettered i, k, s, p and treated j, l, t, q.
census::Edges parse_pattern(const std::string& pattern) {
    const std::string controls = "iksp", treated = "jltq";
    census::Edges edges;
    for (std::size_t pos = 0; pos + 1 < pattern.size(); pos += 3) {
        edges.emplace_back(static_cast<int>(controls.find(pattern[pos])),
                           static_cast<int>(treated.find(pattern[pos + 1])));
    }
    return edges;
}

}  // namespace

TEST(NullPi, Values) {
    const auto p = null_pi_vector();
    EXPECT_EQ(p[Pi::P0], Rational(1, 2));
    EXPECT_EQ(p[Pi::P1], Rational(1, 3));
    EXPECT_EQ(p[Pi::P2], Rational(1, 4));
    EXPECT_EQ(p[Pi::P3], Rational(3, 20));
    EXPECT_EQ(p[Pi::P4], Rational(5, 24));
    EXPECT_EQ(p[Pi::P5], Rational(2, 15));
    EXPECT_EQ(p[Pi::P6], Rational(1, 5));
    EXPECT_EQ(p[Pi::P7], Rational(3, 20));
    EXPECT_EQ(p[Pi::P8], Rational(1, 6));
    EXPECT_EQ(p[Pi::P9], Rational(1, 3));
    EXPECT_EQ(p[Pi::P10], Rational(2, 15));
    EXPECT_EQ(p[Pi::P12], Rational(1, 4));
    EXPECT_EQ(p[Pi::P13], Rational(1, 5));
}

TEST(NullPi, MatchesOrderingEnumerationOfEachPattern) {
    const auto p = null_pi_vector();
    for (Pi id : kAllPis) {
        EXPECT_EQ(p[id], census::null_probability(pi_pattern(id).edges)) << pi_name(id);
    }
}

TEST(NullPi, ContainmentMonotonicity) {
    const auto p = null_pi_vector();
    EXPECT_LE(p[Pi::P2], p[Pi::P1]);
    EXPECT_LE(p[Pi::P1], p[Pi::P0]);
    EXPECT_LE(p[Pi::P6], p[Pi::P2]);
    EXPECT_LE(p[Pi::P12], p[Pi::P9]);
    EXPECT_LE(p[Pi::P9], p[Pi::P0]);
    EXPECT_LE(p[Pi::P13], p[Pi::P12]);
    EXPECT_LE(p[Pi::P4], p[Pi::P1]);
    EXPECT_LE(p[Pi::P4], p[Pi::P9]);
}

TEST(PiPatterns, ShapesAndMirrors) {
    for (Pi id : kAllPis) {
        const auto& pat = pi_pattern(id);
        EXPECT_EQ(census::shape(pat.edges), id) << pi_name(id);
        EXPECT_EQ(mirror(mirror(id)), id);
        // Mirroring the pattern's edges gives the mirror pattern's shape.
        census::Edges flipped;
        for (auto [x, y] : pat.edges) flipped.emplace_back(y, x);
        EXPECT_EQ(census::shape(flipped), mirror(id)) << pi_name(id);
    }
    EXPECT_EQ(pi_name(Pi::P12), "pi12");
    EXPECT_EQ(pi_from_name("pi10"), Pi::P10);
    EXPECT_FALSE(pi_from_name("pi11").has_value());
}

TEST(NullTable, Examples) {
    EXPECT_EQ(null_indicator_value("ij kl"), Rational(1, 4));
    EXPECT_EQ(null_indicator_value("ij kj kl"), Rational(5, 24));
    EXPECT_EQ(null_indicator_value("ij kl st pq"), Rational(1, 16));
    EXPECT_FALSE(null_indicator_value("ij ij").has_value());
}

TEST(NullTable, EveryEntryFactorsOverComponents) {
    const auto p = null_pi_vector();
    for (const auto& entry : null_indicator_table()) {
        const auto edges = parse_pattern(entry.pattern);
        EXPECT_GT(entry.value, 0);
        EXPECT_LT(entry.value, 1);
        EXPECT_EQ(entry.value, census::monomial(edges, p)) << entry.pattern;
        EXPECT_EQ(entry.value, census::null_probability(edges)) << entry.pattern;
    }
}

TEST(NullTable, CorrectedEntries) {
    std::vector<std::string> differing;
    for (const auto& entry : null_indicator_table()) {
        if (entry.value != entry.published) differing.push_back(entry.pattern);
    }
    EXPECT_EQ(differing, (std::vector<std::string>{"ij kj il kt", "ij kj il st"}));
    EXPECT_EQ(null_indicator_value("ij kj il kt"), Rational(2, 15));
    EXPECT_EQ(null_indicator_value("ij kj il st"), Rational(5, 48));
}

TEST(PiMonteCarlo, DisjointSupportsGiveOnes) {
    const auto x = Distribution::uniform(0, 1);
    const auto est = pi_monte_carlo(x, x.shifted(10), 1000, 42);
    for (Pi id : kAllPis) {
        EXPECT_EQ(est.value[id], 1.0);
        EXPECT_EQ(est.standard_error[id], 0.0);
    }
}

TEST(PiMonteCarlo, NullWithinFiveStandardErrors) {
    const auto x = Distribution::uniform(0, 1);
    const auto est = pi_monte_carlo(x, x, 1'000'000, 2024);
    const auto exact = null_pi_vector();
    for (Pi id : kAllPis) {
        EXPECT_LT(std::fabs(est.value[id] - to_double(exact[id])), 5 * est.standard_error[id]) << pi_name(id);
    }
}

TEST(PiMonteCarlo, DeterministicForAnyThreadCount) {
    const auto x = Distribution::normal(0, 1);
    const auto y = Distribution::normal(0.5, 1);
    const auto a = pi_monte_carlo(x, y, 100'000, 9, 1);
    const auto b = pi_monte_carlo(x, y, 100'000, 9, 1);
    const auto c = pi_monte_carlo(x, y, 100'000, 9, 3);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.value, c.value);
    EXPECT_EQ(a.standard_error, c.standard_error);
    EXPECT_THROW(pi_monte_carlo(x, y, 0, 1), DomainError);
}

namespace {

Rational brute_force_plugin(const std::vector<double>& xs, const std::vector<double>& ys, Pi id) {
    const auto& pat = pi_pattern(id);
    long hits = 0, total = 0;
    std::vector<int> xi(pat.controls), yi(pat.treated);
    auto distinct = [](const std::vector<int>& v) {
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b)
                if (v[a] == v[b]) return false;
        return true;
    };
    auto rec = [&](auto&& self, int k) -> void {
        if (k == pat.controls + pat.treated) {
            if (!distinct(xi) || !distinct(yi)) return;
            ++total;
            bool ok = true;
            for (auto [i, j] : pat.edges) ok = ok && xs[xi[i]] < ys[yi[j]];
            hits += ok;
            return;
        }
        const bool control = k < pat.controls;
        const int size = static_cast<int>(control ? xs.size() : ys.size());
        for (int v = 0; v < size; ++v) {
            (control ? xi[k] : yi[k - pat.controls]) = v;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return Rational(hits, total);
}

}  // namespace

TEST(PiPlugin, Examples) {
    const std::vector<double> xs = {1, 3, 5, 7}, ys = {2, 4, 6, 8};
    EXPECT_EQ(pi_plugin_from_data(xs, ys)[Pi::P0], Rational(10, 16));
    const std::vector<double> low = {0, 1, 2, 3}, high = {10, 11, 12, 13};
    for (Pi id : kAllPis) {
        EXPECT_EQ(pi_plugin_from_data(low, high)[id], 1);
        EXPECT_EQ(pi_plugin_from_data(high, low)[id], 0);
    }
}

TEST(PiPlugin, MatchesBruteForce) {
    Rng rng(5);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<double> xs(5 + rep % 2), ys(6 - rep % 3 + 1);
        for (double& x : xs) x = uniform_open01(rng);
        for (double& y : ys) y = uniform_open01(rng) + 0.2;
        const auto p = pi_plugin_from_data(xs, ys);
        for (Pi id : kAllPis) EXPECT_EQ(p[id], brute_force_plugin(xs, ys, id)) << pi_name(id) << " rep " << rep;
    }
}

TEST(PiPlugin, Errors) {
    const std::vector<double> three = {1, 2, 3}, four = {4, 5, 6, 7};
    EXPECT_THROW(pi_plugin_from_data(three, four), InsufficientData);
    EXPECT_THROW(pi_plugin_from_data(four, three), InsufficientData);
    const std::vector<double> tie = {0.5, 1, 5, 9};
    EXPECT_THROW(pi_plugin_from_data(tie, four), TieError);
}

TEST(PiPlugin, NullMeanConverges) {
    Rng rng(77);
    const int datasets = 2000;
    double sum = 0, sum2 = 0;
    for (int r = 0; r < datasets; ++r) {
        std::vector<double> xs(8), ys(8);
        for (double& x : xs) x = uniform_open01(rng);
        for (double& y : ys) y = uniform_open01(rng);
        const double v = to_double(pi_plugin_from_data(xs, ys)[Pi::P0]);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / datasets;
    const double se = std::sqrt((sum2 / datasets - mean * mean) / (datasets - 1));
    EXPECT_LT(std::fabs(mean - 0.5), 5 * se);
}

TEST(PiVector, RangeCheck) {
    auto p = PiVector<double>::filled(0.5);
    EXPECT_NO_THROW(check_pi_range(p));
    p[Pi::P8] = 1.5;
    EXPECT_THROW(check_pi_range(p), DomainError);
}
