#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tsmw/errors.hpp"
#include "tsmw/oracle.hpp"
#include "tsmw/validation.hpp"

using namespace tsmw;

namespace {

// Every distinct sequence of the four observation kinds, checked one by one.
std::map<std::pair<Count, Count>, BigInt> brute_force_counts(const SampleDesign& d) {
    std::vector<int> kinds;  // 0: stage-1 control, 1: stage-2 control, 2: stage-1 treated, 3: stage-2 treated
    kinds.insert(kinds.end(), d.controls1, 0);
    kinds.insert(kinds.end(), d.controls - d.controls1, 1);
    kinds.insert(kinds.end(), d.treated1, 2);
    kinds.insert(kinds.end(), d.treated - d.treated1, 3);
    std::sort(kinds.begin(), kinds.end());
    std::map<std::pair<Count, Count>, BigInt> out;
    do {
        Count x1 = 0, x = 0, u1 = 0, u2 = 0;
        for (int k : kinds) {
            if (k == 0) ++x1, ++x;
            if (k == 1) ++x;
            if (k == 2) u1 += x1, u2 += x;
            if (k == 3) u2 += x;
        }
        out[{u1, u2}] += 1;
    } while (std::next_permutation(kinds.begin(), kinds.end()));
    return out;
}

// Classical single-sample null counts: ways to get U = u with M controls and N treated.
std::vector<BigInt> classical_counts(Count M, Count N) {
    // f(M, N, u) = f(M-1, N, u - N) + f(M, N-1, u), by where the largest observation falls.
    std::map<std::tuple<Count, Count, Count>, BigInt> memo;
    auto f = [&](auto&& self, Count a, Count b, Count u) -> BigInt {
        if (u < 0) return 0;
        if (a == 0 || b == 0) return u == 0 ? 1 : 0;
        auto key = std::make_tuple(a, b, u);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        BigInt v = self(self, a, b - 1, u - a) + self(self, a - 1, b, u);
        memo[key] = v;
        return v;
    };
    std::vector<BigInt> out;
    for (Count u = 0; u <= M * N; ++u) out.push_back(f(f, M, N, u));
    return out;
}

}  // namespace

TEST(JointPmf, Examples) {
    const auto unit = exact_joint_pmf(SampleDesign::make(1, 1, 1, 1));
    EXPECT_EQ(unit.counts.size(), 2u);
    EXPECT_EQ(unit.probability(0, 0), Rational(1, 2));
    EXPECT_EQ(unit.probability(1, 1), Rational(1, 2));

    const auto small = exact_joint_pmf(SampleDesign::make(1, 1, 2, 2));
    const auto u2 = small.u2_marginal();
    const std::vector<Rational> expected = {Rational(1, 6), Rational(1, 6), Rational(2, 6), Rational(1, 6),
                                            Rational(1, 6)};
    ASSERT_EQ(u2.size(), 5u);
    for (Count k = 0; k <= 4; ++k) EXPECT_EQ(u2.at(k), expected[k]);
}

TEST(JointPmf, MatchesBruteForceSequences) {
    for (const SampleDesign& d : design_grid(7)) {
        const auto pmf = exact_joint_pmf(d);
        const auto brute = brute_force_counts(d);
        BigInt total = 0;
        for (const auto& [k, c] : brute) total += c;
        ASSERT_EQ(pmf.total, total) << to_string(d);
        EXPECT_EQ(pmf.counts, brute) << to_string(d);
    }
}

TEST(JointPmf, InvariantsOnGrid) {
    for (const SampleDesign& d : design_grid(10)) {
        const auto pmf = exact_joint_pmf(d);
        Rational sum = 0;
        for (const auto& [key, c] : pmf.counts) {
            sum += Rational(c, pmf.total);
            EXPECT_LE(key.first, key.second);
            EXPECT_LE(key.second, d.max_u2());
        }
        EXPECT_EQ(sum, 1);
        const auto u2 = pmf.u2_marginal();
        for (const auto& [k, p] : u2) EXPECT_EQ(p, u2.at(d.max_u2() - k));
    }
}

TEST(JointPmf, MarginalsAreClassical) {
    for (const SampleDesign& d : {SampleDesign::make(2, 3, 4, 5), SampleDesign::make(3, 1, 6, 4)}) {
        const auto pmf = exact_joint_pmf(d);
        const auto u2 = pmf.u2_marginal();
        const auto classical = classical_counts(d.controls, d.treated);
        BigInt total = 0;
        for (const auto& c : classical) total += c;
        for (Count u = 0; u <= d.max_u2(); ++u) EXPECT_EQ(u2.at(u), Rational(classical[u], total));
        const auto u1 = pmf.u1_marginal();
        const auto c1 = classical_counts(d.controls1, d.treated1);
        BigInt t1 = 0;
        for (const auto& c : c1) t1 += c;
        for (Count u = 0; u <= d.max_u1(); ++u) EXPECT_EQ(u1.at(u), Rational(c1[u], t1));
    }
}

TEST(JointPmf, Budget) {
    EXPECT_THROW(exact_joint_pmf(SampleDesign::make(8, 8, 16, 16)), BudgetExceeded);
    EXPECT_THROW(exact_joint_pmf(SampleDesign::make(2, 2, 5, 5), 100), BudgetExceeded);
    EXPECT_NO_THROW(exact_joint_pmf(SampleDesign::make(2, 2, 5, 5), 252));
    ::setenv("TWOSTAGE_MW_BUDGET", "10", 1);
    EXPECT_EQ(enumeration_budget(), 10u);
    EXPECT_THROW(exact_joint_pmf(SampleDesign::make(1, 1, 3, 3)), BudgetExceeded);
    ::setenv("TWOSTAGE_MW_BUDGET", "lots", 1);
    EXPECT_THROW(enumeration_budget(), DomainError);
    ::unsetenv("TWOSTAGE_MW_BUDGET");
    EXPECT_EQ(enumeration_budget(), 20'000'000u);
}

TEST(PmfMoments, Examples) {
    const auto unit = pmf_moments(exact_joint_pmf(SampleDesign::make(1, 1, 1, 1)));
    for (const Rational& v : unit.values) EXPECT_EQ(v, Rational(1, 2));
    EXPECT_EQ(pmf_moments(exact_joint_pmf(SampleDesign::make(1, 1, 2, 2)))(1, 1), Rational(17, 12));
    const SampleDesign d = SampleDesign::make(2, 2, 3, 3);
    const auto pm = pmf_moments(point_mass(d, 4, 9));
    for (auto [a, b] : kMomentOrders) {
        Rational expected = 1;
        for (int i = 0; i < a; ++i) expected *= 4;
        for (int i = 0; i < b; ++i) expected *= 9;
        EXPECT_EQ(pm(a, b), expected);
    }
    EXPECT_THROW(pmf_moments(point_mass(d, 1, 1), 5), DomainError);
}

TEST(PmfCumulants, Examples) {
    const auto unit = pmf_cumulants(exact_joint_pmf(SampleDesign::make(1, 1, 1, 1)));
    EXPECT_EQ(unit(2, 0), Rational(1, 4));
    EXPECT_EQ(unit(1, 1), Rational(1, 4));
    EXPECT_EQ(unit(4, 0), Rational(-1, 8));
    EXPECT_EQ(pmf_cumulants(exact_joint_pmf(SampleDesign::make(1, 1, 2, 2)))(1, 1), Rational(5, 12));
    const auto pm = pmf_cumulants(point_mass(SampleDesign::make(1, 1, 2, 2), 1, 3));
    for (auto [r, s] : kMomentOrders) {
        if (r + s >= 2) EXPECT_EQ(pm(r, s), 0);
    }
}

TEST(PmfCumulants, TwoPathsAgreeOnGrid) {
    for (const SampleDesign& d : design_grid(10)) {
        const auto pmf = exact_joint_pmf(d);
        EXPECT_EQ(mixed_cumulants(pmf_moments(pmf)), pmf_cumulants(pmf)) << to_string(d);
    }
}

TEST(HelperEnumeration, SmallCases) {
    EXPECT_EQ(enumerate_helper_h(2, 1), Rational(8, 3));
    EXPECT_EQ(enumerate_helper_k(1, 2), Rational(8, 3));
    EXPECT_THROW(enumerate_helper_h(1, 3), DomainError);
    EXPECT_THROW(enumerate_helper_k(3, 1), DomainError);
}

TEST(Simulation, NullWithinFiveStandardErrors) {
    const SampleDesign d = SampleDesign::make(2, 2, 4, 4);
    const auto u = Distribution::uniform(0, 1);
    const auto est = simulate_joint(d, u, u, 1'000'000, 31);
    const auto exact = moments_null(d);
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
        EXPECT_LT(std::fabs(est.values.values[i] - to_double(exact.values[i])), 5 * est.standard_errors.values[i]);
    }
}

TEST(Simulation, ErrorShrinksWithReplications) {
    const SampleDesign d = SampleDesign::make(2, 2, 4, 4);
    const auto u = Distribution::uniform(0, 1);
    const auto small = simulate_joint(d, u, u, 10'000, 8);
    const auto large = simulate_joint(d, u, u, 1'000'000, 8);
    const auto exact = moments_null(d);
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
        const double ratio = small.standard_errors.values[i] / large.standard_errors.values[i];
        EXPECT_GT(ratio, 8.0);
        EXPECT_LT(ratio, 12.5);
        EXPECT_LT(std::fabs(large.values.values[i] - to_double(exact.values[i])), 5 * large.standard_errors.values[i]);
    }
}

TEST(Simulation, DisjointSupportsAndDeterminism) {
    const SampleDesign d = SampleDesign::make(2, 3, 3, 4);
    const auto x = Distribution::normal(0, 1);
    const auto top = simulate_joint(d, Distribution::uniform(0, 1), Distribution::uniform(5, 6), 5000, 3);
    for (auto [a, b] : kMomentOrders) {
        const double v = std::pow(6.0, a) * std::pow(12.0, b);
        EXPECT_NEAR(top.values(a, b), v, 1e-12 * v);
        EXPECT_NEAR(top.standard_errors(a, b), 0.0, 1e-9 * v);
    }
    const auto r1 = simulate_joint(d, x, x.shifted(0.2), 70'000, 99, 1);
    const auto r2 = simulate_joint(d, x, x.shifted(0.2), 70'000, 99, 4);
    EXPECT_EQ(r1.values, r2.values);
    EXPECT_EQ(r1.standard_errors, r2.standard_errors);
}
